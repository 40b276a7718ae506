//! Tree snapshots as JSON and as DOT.

use std::fmt::{self, Write as _};

use bgrw_core::process::TreeState;
use bgrw_core::VertexId;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::provenance::Provenance;

/// `{"vertices": N, "root": id, "walker": id, "edges": [[u, v], ...]}` with
/// `u < v` and edges in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSnapshot {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub vertices: u64,
    pub root: VertexId,
    pub walker: VertexId,
    pub edges: Vec<[VertexId; 2]>,
}

impl TreeSnapshot {
    /// The materialized part of `state`.
    pub fn from_state(state: &TreeState) -> Self {
        Self {
            provenance: None,
            vertices: state.vertex_count() as u64,
            root: state.root(),
            walker: state.walker(),
            edges: state.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// Sorts and orients the edges.
    pub fn normalize(&mut self) {
        for e in &mut self.edges {
            if e[0] > e[1] {
                e.swap(0, 1);
            }
        }
        self.edges.sort_unstable();
    }

    /// Rebuilds the tree, checking the tree property.
    pub fn to_state(&self) -> CliResult<TreeState> {
        let n = usize::try_from(self.vertices)
            .map_err(|_| CliError::Runtime("vertex count out of range".into()))?;
        let edges: Vec<(VertexId, VertexId)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        TreeState::from_edges(n, &edges, self.root, self.walker)
            .map_err(|e| CliError::Runtime(format!("not a tree: {e}")))
    }

    /// Height above the root.
    pub fn height(&self) -> CliResult<u32> {
        Ok(self.to_state()?.height())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("snapshot serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let mut snap: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Runtime(format!("tree JSON: {e}")))?;
        snap.normalize();
        snap.to_state()?;
        Ok(snap)
    }

    /// Undirected DOT with the root and walker nodes labeled.
    pub fn to_dot(&self) -> String {
        let mut s = String::with_capacity(16 * self.edges.len() + 128);
        if let Some(p) = &self.provenance {
            s.push_str(&p.dot_comment());
        }
        s.push_str("graph tree {\n");
        if self.root == self.walker {
            let _ = writeln!(s, "  {} [label=\"root walker\", role=\"root walker\"];", self.root);
        } else {
            let _ = writeln!(s, "  {} [label=\"root\", role=\"root\"];", self.root);
            let _ = writeln!(s, "  {} [label=\"walker\", role=\"walker\"];", self.walker);
        }
        for [u, v] in &self.edges {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }

    pub fn from_dot(text: &str) -> CliResult<Self> {
        let snap = parse_dot(text).map_err(|e| CliError::Runtime(e.to_string()))?;
        snap.to_state()?;
        Ok(snap)
    }
}

/// A DOT syntax error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for DotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DOT parse error at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for DotError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    UndirectedEdge,
    DirectedEdge,
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    at_line_start: bool,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
            at_line_start: true,
        }
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> DotError {
        DotError {
            line,
            column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
            self.at_line_start = true;
        } else {
            self.column += 1;
            if !c.is_whitespace() {
                self.at_line_start = false;
            }
        }
        Some(c)
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.bump() {
            if c == '\n' {
                break;
            }
        }
    }

    /// Next token with the position where it starts.
    fn next(&mut self) -> Result<(Tok, usize, usize), DotError> {
        loop {
            let (line, column) = (self.line, self.column);
            let line_start = self.at_line_start;
            let Some(&c) = self.chars.peek() else {
                return Ok((Tok::Eof, line, column));
            };
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' && line_start {
                self.skip_line();
                continue;
            }
            self.bump();
            let tok = match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '=' => Tok::Eq,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                '/' => match self.bump() {
                    Some('/') => {
                        self.skip_line();
                        continue;
                    }
                    Some('*') => {
                        let mut prev = ' ';
                        loop {
                            match self.bump() {
                                Some('/') if prev == '*' => break,
                                Some(ch) => prev = ch,
                                None => return Err(self.error(line, column, "unterminated comment")),
                            }
                        }
                        continue;
                    }
                    _ => return Err(self.error(line, column, "unexpected `/`")),
                },
                '-' => match self.chars.peek() {
                    Some('-') => {
                        self.bump();
                        Tok::UndirectedEdge
                    }
                    Some('>') => {
                        self.bump();
                        Tok::DirectedEdge
                    }
                    _ => Tok::Id(self.word('-')),
                },
                '"' => {
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some(ch) => {
                                    if ch != '"' {
                                        s.push('\\');
                                    }
                                    s.push(ch);
                                }
                                None => return Err(self.error(line, column, "unterminated string")),
                            },
                            Some(ch) => s.push(ch),
                            None => return Err(self.error(line, column, "unterminated string")),
                        }
                    }
                    Tok::Id(s)
                }
                c if c.is_alphanumeric() || c == '_' || c == '.' => Tok::Id(self.word(c)),
                other => return Err(self.error(line, column, format!("unexpected character `{other}`"))),
            };
            return Ok((tok, line, column));
        }
    }

    fn word(&mut self, first: char) -> String {
        let mut s = String::from(first);
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || c == '_' || c == '.' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, DotError> {
        let mut lexer = Lexer::new(text);
        let (tok, line, column) = lexer.next()?;
        Ok(Self {
            lexer,
            tok,
            line,
            column,
        })
    }

    fn advance(&mut self) -> Result<Tok, DotError> {
        let (tok, line, column) = self.lexer.next()?;
        self.line = line;
        self.column = column;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, message: impl Into<String>) -> DotError {
        DotError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), DotError> {
        if self.tok == want {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn id(&mut self, what: &str) -> Result<String, DotError> {
        match &self.tok {
            Tok::Id(s) => {
                let s = s.clone();
                self.advance()?;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn vertex(&mut self) -> Result<VertexId, DotError> {
        let (line, column) = (self.line, self.column);
        let s = self.id("a node id")?;
        s.parse().map_err(|_| DotError {
            line,
            column,
            message: format!("node id `{s}` is not a vertex number"),
        })
    }

    fn attributes(&mut self) -> Result<Vec<(String, String)>, DotError> {
        let mut out = Vec::new();
        while self.tok == Tok::LBracket {
            self.advance()?;
            while self.tok != Tok::RBracket {
                let key = self.id("an attribute name")?;
                self.expect(Tok::Eq, "`=`")?;
                let value = self.id("an attribute value")?;
                out.push((key, value));
                if matches!(self.tok, Tok::Comma | Tok::Semi) {
                    self.advance()?;
                }
            }
            self.advance()?;
        }
        Ok(out)
    }
}

fn parse_dot(text: &str) -> Result<TreeSnapshot, DotError> {
    let mut p = Parser::new(text)?;
    if matches!(&p.tok, Tok::Id(s) if s.eq_ignore_ascii_case("strict")) {
        p.advance()?;
    }
    match &p.tok {
        Tok::Id(s) if s.eq_ignore_ascii_case("graph") => {
            p.advance()?;
        }
        Tok::Id(s) if s.eq_ignore_ascii_case("digraph") => {
            return Err(p.error("directed graphs are not tree snapshots; use `graph`"))
        }
        _ => return Err(p.error("expected `graph`")),
    }
    if let Tok::Id(_) = p.tok {
        p.advance()?;
    }
    p.expect(Tok::LBrace, "`{`")?;

    let mut nodes: Vec<VertexId> = Vec::new();
    let mut edges: Vec<[VertexId; 2]> = Vec::new();
    let mut root: Option<VertexId> = None;
    let mut walker: Option<VertexId> = None;
    loop {
        match &p.tok {
            Tok::RBrace => {
                p.advance()?;
                break;
            }
            Tok::Semi => {
                p.advance()?;
            }
            Tok::Eof => return Err(p.error("missing closing `}`")),
            Tok::Id(s) if matches!(s.as_str(), "graph" | "node" | "edge") => {
                p.advance()?;
                p.attributes()?;
            }
            Tok::Id(s) if s.parse::<VertexId>().is_err() => {
                // graph-level `key = value`
                p.advance()?;
                p.expect(Tok::Eq, "`=` after a graph attribute name")?;
                p.id("an attribute value")?;
            }
            Tok::Id(_) => {
                let (line, column) = (p.line, p.column);
                let first = p.vertex()?;
                nodes.push(first);
                let mut prev = first;
                let mut chained = false;
                loop {
                    match p.tok {
                        Tok::UndirectedEdge => {
                            p.advance()?;
                            let next = p.vertex()?;
                            nodes.push(next);
                            edges.push([prev.min(next), prev.max(next)]);
                            prev = next;
                            chained = true;
                        }
                        Tok::DirectedEdge => return Err(p.error("directed edge `->` in an undirected tree")),
                        _ => break,
                    }
                }
                let attrs = p.attributes()?;
                if !chained {
                    for (k, v) in attrs {
                        if k != "role" {
                            continue;
                        }
                        for role in v.split_whitespace() {
                            let slot = match role {
                                "root" => &mut root,
                                "walker" => &mut walker,
                                _ => continue,
                            };
                            if slot.replace(first).is_some_and(|old| old != first) {
                                return Err(DotError {
                                    line,
                                    column,
                                    message: format!("second node with role `{role}`"),
                                });
                            }
                        }
                    }
                }
            }
            _ => return Err(p.error("expected a statement")),
        }
    }
    if p.tok != Tok::Eof {
        return Err(p.error("trailing content after the graph"));
    }
    let root = root.ok_or_else(|| p.error("no node has role `root`"))?;
    let walker = walker.ok_or_else(|| p.error("no node has role `walker`"))?;
    let vertices = nodes.iter().copied().max().map_or(0, |m| m as u64 + 1);
    let mut snap = TreeSnapshot {
        provenance: None,
        vertices,
        root,
        walker,
        edges,
    };
    snap.normalize();
    Ok(snap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bgrw_core::process::{make_initial_tree, InitialTree};

    #[test]
    fn single_vertex_dot() {
        let s = TreeSnapshot::from_state(&make_initial_tree(InitialTree::Single).unwrap());
        let dot = s.to_dot();
        assert_eq!(dot.matches("--").count(), 0);
        assert_eq!(dot.lines().filter(|l| l.contains('[')).count(), 1);
        assert_eq!(TreeSnapshot::from_dot(&dot).unwrap(), s);
    }

    #[test]
    fn star_round_trip() {
        let s = TreeSnapshot::from_state(&make_initial_tree(InitialTree::Star(4)).unwrap());
        let back = TreeSnapshot::from_json(&TreeSnapshot::from_dot(&s.to_dot()).unwrap().to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn chains_comments_and_graph_attributes() {
        let text = "# note\ngraph g {\n rankdir=LR; /* c */ 2 -- 1 -- 0\n 0 [role=root]\n 2 [role=\"walker\"]\n}\n";
        let s = TreeSnapshot::from_dot(text).unwrap();
        assert_eq!((s.vertices, s.root, s.walker), (3, 0, 2));
        assert_eq!(s.edges, vec![[0, 1], [1, 2]]);
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_dot("graph {\n  0 -> 1;\n}").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_dot("graph {\n  0 -- x;\n}").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert!(parse_dot("graph {\n 0 [role=root walker]").is_err());
        let e = parse_dot("graph { 0 [role=\"root walker\"]; }").unwrap();
        assert_eq!(e.vertices, 1);
        assert!(TreeSnapshot::from_dot("graph { 0 [role=\"root walker\"]; 0 -- 1; 1 -- 0 }").is_err());
    }

    #[test]
    fn json_rejects_non_trees() {
        assert!(TreeSnapshot::from_json(r#"{"vertices":3,"root":0,"walker":0,"edges":[[0,1]]}"#).is_err());
        let s = TreeSnapshot::from_json(r#"{"vertices":2,"root":0,"walker":1,"edges":[[1,0]]}"#).unwrap();
        assert_eq!(s.edges, vec![[0, 1]]);
    }
}
