//! Recursive-descent checker for the Graphviz DOT language.
//!
//! Covers the full statement grammar (node, edge, attribute, assignment and
//! subgraph statements) and all four ID forms. Returns the node ids and edges
//! it saw so callers can also check structure.

#![allow(dead_code)]

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Colon,
    Arrow,
    Line,
}

#[derive(Debug, Default)]
pub struct DotGraph {
    pub directed: bool,
    pub nodes: BTreeSet<String>,
    pub edges: Vec<(String, String)>,
}

fn punct(c: char) -> Option<Tok> {
    Some(match c {
        '{' => Tok::LBrace,
        '}' => Tok::RBrace,
        '[' => Tok::LBracket,
        ']' => Tok::RBracket,
        '=' => Tok::Eq,
        ';' => Tok::Semi,
        ',' => Tok::Comma,
        ':' => Tok::Colon,
        _ => return None,
    })
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '#' if i == 0 || chars[i - 1] == '\n' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                loop {
                    if i + 1 >= chars.len() {
                        return Err("unterminated comment".into());
                    }
                    if chars[i] == '*' && chars[i + 1] == '/' {
                        i += 2;
                        break;
                    }
                    i += 1;
                }
            }
            _ if punct(c).is_some() => {
                out.extend(punct(c));
                i += 1;
            }
            '-' if matches!(chars.get(i + 1), Some('>' | '-')) => {
                out.push(if chars[i + 1] == '>' {
                    Tok::Arrow
                } else {
                    Tok::Line
                });
                i += 2;
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Tok::Id(s));
            }
            '<' => {
                let mut depth = 0;
                let start = i;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated HTML string".into()),
                        Some('<') => depth += 1,
                        Some('>') => {
                            depth -= 1;
                            if depth == 0 {
                                i += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            _ if c.is_ascii_digit() || c == '.' || c == '-' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let digits = s.trim_start_matches('-');
                if digits.is_empty() || digits == "." || digits.matches('.').count() > 1 {
                    return Err(format!("bad numeral {s:?}"));
                }
                out.push(Tok::Id(s));
            }
            _ if c.is_alphabetic() || c == '_' || (c as u32) >= 0x80 => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || (chars[i] as u32) >= 0x80)
                {
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            _ => return Err(format!("unexpected character {c:?} at {i}")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    graph: DotGraph,
}

fn keyword(t: Option<&Tok>, kw: &str) -> bool {
    matches!(t, Some(Tok::Id(s)) if s.eq_ignore_ascii_case(kw))
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), String> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(format!(
                "expected {want:?}, found {other:?} at token {}",
                self.pos - 1
            )),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            other => Err(format!(
                "expected ID, found {other:?} at token {}",
                self.pos - 1
            )),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if keyword(self.peek(), "strict") {
            self.pos += 1;
        }
        if keyword(self.peek(), "digraph") {
            self.graph.directed = true;
        } else if !keyword(self.peek(), "graph") {
            return Err("expected graph or digraph".into());
        }
        self.pos += 1;
        if matches!(self.peek(), Some(Tok::Id(_))) {
            self.pos += 1;
        }
        self.expect(Tok::LBrace)?;
        self.stmt_list()?;
        self.expect(Tok::RBrace)?;
        if self.pos != self.toks.len() {
            return Err("trailing tokens after graph".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !matches!(self.peek(), Some(Tok::RBrace) | None) {
            self.stmt()?;
            if self.peek() == Some(&Tok::Semi) {
                self.pos += 1;
            }
        }
        Ok(())
    }

    fn attr_list(&mut self) -> Result<(), String> {
        while self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            while self.peek() != Some(&Tok::RBracket) {
                self.id()?;
                self.expect(Tok::Eq)?;
                self.id()?;
                if matches!(self.peek(), Some(Tok::Semi | Tok::Comma)) {
                    self.pos += 1;
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        if ["graph", "node", "edge"]
            .iter()
            .any(|k| keyword(self.peek(), k))
        {
            self.pos += 1;
            if self.peek() != Some(&Tok::LBracket) {
                return Err("attribute statement without attr_list".into());
            }
            return self.attr_list();
        }
        let first = self.endpoint()?;
        if self.peek() == Some(&Tok::Eq) {
            self.pos += 1;
            self.id()?;
            return Ok(());
        }
        let mut prev = first;
        while matches!(self.peek(), Some(Tok::Arrow | Tok::Line)) {
            let op = self.next().unwrap();
            if (op == Tok::Arrow) != self.graph.directed {
                return Err("edge operator does not match graph kind".into());
            }
            let next = self.endpoint()?;
            if let (Some(a), Some(b)) = (&prev, &next) {
                self.graph.edges.push((a.clone(), b.clone()));
            }
            prev = next;
        }
        self.attr_list()
    }

    /// A node id (returned) or a subgraph (`None`).
    fn endpoint(&mut self) -> Result<Option<String>, String> {
        if keyword(self.peek(), "subgraph") || self.peek() == Some(&Tok::LBrace) {
            if keyword(self.peek(), "subgraph") {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Id(_))) {
                    self.pos += 1;
                }
            }
            self.expect(Tok::LBrace)?;
            self.stmt_list()?;
            self.expect(Tok::RBrace)?;
            return Ok(None);
        }
        let id = self.id()?;
        if self.peek() == Some(&Tok::Colon) {
            self.pos += 1;
            self.id()?;
            if self.peek() == Some(&Tok::Colon) {
                self.pos += 1;
                self.id()?;
            }
        }
        self.graph.nodes.insert(id.clone());
        Ok(Some(id))
    }
}

pub fn check(src: &str) -> Result<DotGraph, String> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        graph: DotGraph::default(),
    };
    p.graph()?;
    Ok(p.graph)
}

/// A DOT graph that also forms a rooted tree: one root, every other node
/// with exactly one parent, and `nodes` nodes in total.
pub fn check_tree(src: &str, nodes: usize) -> Result<(), String> {
    let g = check(src)?;
    if !g.directed {
        return Err("tree graph must be a digraph".into());
    }
    if g.nodes.len() != nodes {
        return Err(format!("expected {nodes} nodes, found {}", g.nodes.len()));
    }
    if g.edges.len() + 1 != nodes {
        return Err(format!("{} edges for {nodes} nodes", g.edges.len()));
    }
    let children: BTreeSet<&String> = g.edges.iter().map(|(_, c)| c).collect();
    if children.len() != g.edges.len() {
        return Err("a node has more than one parent".into());
    }
    let roots = g.nodes.iter().filter(|n| !children.contains(n)).count();
    if roots != 1 {
        return Err(format!("{roots} roots"));
    }
    Ok(())
}
