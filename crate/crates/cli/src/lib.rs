//! The `trop` command line. [`run`] is the whole program; `main` only wires
//! it to the process streams.
//!
//! Exit codes: 0 on success, 1 when the answer is negative or the input is
//! mathematically degenerate (a certificate is printed), 2 on usage and
//! parse errors.

pub mod expr;
pub mod input;
pub mod json;
pub mod svg;

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{CommandFactory, Parser, Subcommand};

/// Why a command did not succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad arguments or unreadable input. Exit code 2.
    Usage(String),
    /// A negative answer or degenerate input, with the certificate already
    /// written to the output. Exit code 1.
    Negative,
}

impl Failure {
    pub fn usage(e: impl std::fmt::Display) -> Failure {
        Failure::Usage(e.to_string())
    }
}

const FORMATS: &str = "\
Polynomials use `+` for tropical sum (min) and `*` for tropical product (+):
  \"x^2 + 17*x + 2\", \"-1/2*x*y^2 + 3.5*x + y + 0\", \"inf*x\" (a vanishing term).
A missing coefficient is 0. Matrices, distances and Plücker vectors are read
from a file, or inline with `;` between lines:
  matrix         \"2 2;0 1;1 0\" (`inf` allowed)
  distances      a matrix, optionally preceded by a line of taxon labels
  Plücker vector \"n d\" header, then one line per d-subset: indices (from 1) and value
Exit codes: 0 success, 1 negative answer or degenerate input (certificate
printed), 2 usage or parse error.";

#[derive(Debug, Parser)]
#[command(
    name = "trop",
    version,
    about = "Exact tropical (min-plus) algebra: polynomials, plane curves, tree metrics and linear spaces",
    after_help = FORMATS,
    color = clap::ColorChoice::Never
)]
struct Cli {
    /// Print machine-readable JSON; rationals are strings like "3/2".
    #[arg(long, global = true)]
    json: bool,
    /// Also draw the curve or tree to this SVG file.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Comma-separated variable order, e.g. "x,y".
    #[arg(long, global = true, value_name = "LIST")]
    vars: Option<String>,
    /// Drawing box: "R" for [-R,R]^2 or "xmin,ymin,xmax,ymax".
    #[arg(long, global = true, value_name = "BOX", allow_hyphen_values = true)]
    viewport: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a polynomial at a point and list the minimizing terms.
    #[command(after_help = "Example:\n  trop eval \"x^3 + 1*x^2 + 3*x + 6\" 2\n  5\n  attained by 2 terms: 3*x, 1*x^2")]
    Eval {
        expr: String,
        /// Coordinates in variable order, as separate arguments or "a,b".
        #[arg(required = true, allow_hyphen_values = true)]
        point: Vec<String>,
    },
    /// Roots of a univariate polynomial with multiplicities.
    #[command(after_help = "Example:\n  trop roots \"x^2 + 17*x + 2\"\n  1 (multiplicity 2)")]
    Roots { expr: String },
    /// Factor a univariate polynomial into linear factors.
    #[command(after_help = "Example:\n  trop factor \"x^3 + 1*x^2 + 3*x + 6\"\n  (x + 1) * (x + 2) * (x + 3)")]
    Factor { expr: String },
    /// Decide whether two polynomials define the same function.
    #[command(after_help = "Example:\n  trop equal \"x^2 + 17*x + 2\" \"x^2 + 1*x + 2\"\n  equal")]
    Equal { left: String, right: String },
    /// The plane tropical curve of a polynomial in x and y.
    #[command(after_help = "Example:\n  trop curve \"x + y + 0\" --svg line.svg\n  one vertex at (0, 0) with rays north, east and southwest")]
    Curve { expr: String },
    /// Stable intersection of two plane curves.
    #[command(after_help = "Example:\n  trop intersect \"x + y + 0\" \"x^2 + -1*x*y + y^2 + -1*x + -1*y + 0\"\n  two points counted with multiplicity")]
    Intersect { left: String, right: String },
    /// The line through 2 points or the conic through 5 points.
    #[command(after_help = "Example:\n  trop interpolate 0,0 2,1\n  x + y + 1")]
    Interpolate {
        /// Points as "x,y".
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Check the metric axioms, including the triangle inequality.
    #[command(after_help = "Example:\n  trop metric-check \"3 3;0 1 3;1 0 1;3 1 0\"\n  not a metric: d(t1,t3) = 3 > d(t1,t2) + d(t2,t3) = 2")]
    MetricCheck { matrix: String },
    /// Check the four-point condition for a tree metric.
    #[command(after_help = "Example:\n  trop tree-metric-check hmrc.dist\n  tree metric")]
    TreeMetricCheck { distances: String },
    /// Reconstruct the tree of a tree metric, printed as Newick.
    #[command(after_help = "Example:\n  trop tree-build hmrc.dist\n  (((M:0.2,R:0.1):0.3,C:0.8):0.6)H;")]
    TreeBuild { distances: String },
    /// Distance matrix of a Newick tree.
    #[command(after_help = "Example:\n  trop tree-dist \"(((M:0.2,R:0.1):0.3,C:0.8):0.6)H;\"")]
    TreeDist { newick: String },
    /// Perimeters d(i,j) + d(i,k) + d(j,k) of all triples of taxa.
    #[command(after_help = "Example:\n  trop triples hmrc.dist\n  H M R 2.4")]
    Triples { distances: String },
    /// Check the three-term tropical Plücker relations.
    #[command(after_help = "Example:\n  trop grass-check \"4 2;1 2 0;1 3 0;2 3 0;1 4 0;2 4 0;3 4 0\"\n  in the tropical Grassmannian")]
    GrassCheck { pluecker: String },
    /// Decide membership of a point in the linear space of a Plücker vector.
    #[command(after_help = "Example:\n  trop linspace-member \"3 2;1 2 0;1 3 0;2 3 0\" 0,0,1\n  in the linear space")]
    LinspaceMember {
        pluecker: String,
        #[arg(required = true, allow_hyphen_values = true)]
        point: Vec<String>,
    },
    /// The tropical hyperplane through n-1 points in n coordinates.
    #[command(after_help = "Example:\n  trop hyperplane 0,0,0 2,1,0\n  0*x1 + 0*x2 + 1*x3")]
    Hyperplane {
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Tropical determinant (minimum over permutations) and singularity.
    #[command(after_help = "Example:\n  trop det \"2 2;0 1;1 0\"\n  0")]
    Det { matrix: String },
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let cli = match Cli::try_parse_from(hoist_global_flags(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Negative) => 1,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

const SWITCHES: [&str; 1] = ["--json"];
const VALUED: [&str; 3] = ["--svg", "--vars", "--viewport"];

/// Moves global flags in front of the subcommand, so that coordinates such
/// as `-1,2` can be taken literally without swallowing a later `--json`.
/// Nothing after a `--` separator is moved.
fn hoist_global_flags<I, T>(args: I) -> Vec<OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args = args.into_iter().map(Into::into);
    let mut flags: Vec<OsString> = args.next().into_iter().collect();
    let mut rest = Vec::new();
    while let Some(arg) = args.next() {
        let text = arg.to_str().unwrap_or("");
        if text == "--" {
            rest.push(arg);
            rest.extend(args.by_ref());
        } else if SWITCHES.contains(&text) || VALUED.iter().any(|f| text.starts_with(&format!("{f}="))) {
            flags.push(arg);
        } else if VALUED.contains(&text) {
            flags.push(arg);
            flags.extend(args.next());
        } else {
            rest.push(arg);
        }
    }
    flags.extend(rest);
    flags
}

/// Full usage text, for documentation and tests.
pub fn usage() -> String {
    let mut cmd = Cli::command();
    let mut text = cmd.render_long_help().to_string();
    for sub in cmd.get_subcommands_mut() {
        text.push_str("\n\n");
        text.push_str(&sub.render_long_help().to_string());
    }
    text
}
