//! Newick reading and label quoting.
//!
//! Every edge needs a length. Labelled nodes become taxa and must be leaves
//! of the unrooted tree; unlabelled nodes of degree two (such as a binary
//! root) are suppressed by merging their edges.

use super::{PhyloError, PhyloTree};
use crate::rational::{parse_rational, Rational};

const SPECIAL: &[char] = &['(', ')', '[', ']', '\'', ':', ';', ','];

pub(super) fn quote_label(label: &str) -> String {
    if label.chars().any(|c| c.is_whitespace() || SPECIAL.contains(&c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize, Rational)>,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, PhyloError> {
        Err(PhyloError::Newick { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), PhyloError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn label(&mut self) -> Result<Option<String>, PhyloError> {
        match self.peek() {
            Some('\'') => {
                self.pos += 1;
                let mut out = String::new();
                loop {
                    let rest = &self.text[self.pos..];
                    let Some(end) = rest.find('\'') else {
                        return self.error("unterminated quoted label");
                    };
                    out.push_str(&rest[..end]);
                    self.pos += end + 1;
                    if self.text[self.pos..].starts_with('\'') {
                        out.push('\'');
                        self.pos += 1;
                    } else {
                        return Ok(Some(out));
                    }
                }
            }
            _ => {
                let rest = &self.text[self.pos..];
                let end = rest.find(|c: char| c.is_whitespace() || SPECIAL.contains(&c)).unwrap_or(rest.len());
                self.pos += end;
                Ok((end > 0).then(|| rest[..end].to_string()))
            }
        }
    }

    fn length(&mut self) -> Result<Rational, PhyloError> {
        if self.peek() != Some(':') {
            return self.error("missing branch length");
        }
        self.pos += 1;
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find(|c: char| c.is_whitespace() || SPECIAL.contains(&c)).unwrap_or(rest.len());
        match parse_rational(&rest[..end]) {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(e) => self.error(e.to_string()),
        }
    }

    fn subtree(&mut self) -> Result<usize, PhyloError> {
        let node = self.labels.len();
        self.labels.push(None);
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                let child = self.subtree()?;
                let len = self.length()?;
                self.edges.push((node, child, len));
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.error("expected `,` or `)`"),
                }
            }
        }
        self.labels[node] = self.label()?;
        if self.labels[node].is_none() && node == self.labels.len() - 1 {
            return self.error("leaf without a label");
        }
        Ok(node)
    }
}

pub(super) fn parse(text: &str) -> Result<PhyloTree, PhyloError> {
    let mut p = Parser { text, pos: 0, labels: Vec::new(), edges: Vec::new() };
    p.subtree()?;
    if p.peek() == Some(':') {
        p.length()?;
    }
    p.expect(';')?;
    if p.peek().is_some() {
        return p.error("trailing content");
    }

    let Parser { labels, edges, .. } = p;
    let mut edges: Vec<Option<(usize, usize, Rational)>> = edges.into_iter().map(Some).collect();
    let degree = |edges: &[Option<(usize, usize, Rational)>], v: usize| {
        edges.iter().flatten().filter(|(a, b, _)| *a == v || *b == v).count()
    };
    for v in 0..labels.len() {
        if labels[v].is_some() || degree(&edges, v) != 2 {
            continue;
        }
        let mut incident = edges.iter_mut().filter(|e| e.as_ref().is_some_and(|(a, b, _)| *a == v || *b == v));
        let first = incident.next().expect("degree two").take().expect("present");
        let second = incident.next().expect("degree two").take().expect("present");
        let other = |(a, b, _): &(usize, usize, Rational)| if *a == v { *b } else { *a };
        edges.push(Some((other(&first), other(&second), first.2 + second.2)));
    }

    // taxa first, in order of appearance, then the remaining internal nodes
    let mut index = vec![usize::MAX; labels.len()];
    let mut taxa = Vec::new();
    for (v, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            index[v] = taxa.len();
            taxa.push(l.clone());
        }
    }
    let mut next = taxa.len();
    for v in 0..labels.len() {
        if labels[v].is_none() && degree(&edges, v) > 0 {
            index[v] = next;
            next += 1;
        }
    }
    let edges = edges.into_iter().flatten().map(|(a, b, len)| (index[a], index[b], len)).collect();
    PhyloTree::new(taxa, next, edges)
}
