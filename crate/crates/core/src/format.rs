//! Text format for games and JSON format for templates.
//!
//! Games use a header `stochastic parity N;` followed by one record per vertex,
//! `id priority owner succ,succ,... ["name"];`, with owner `0` = Even, `1` = Odd
//! and `2` = Random. `N` is the number of vertices and ids run from `0` to `N-1`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::GameError;
use crate::game::{Edge, Owner, PriorityFunction, StochasticGame, VertexId, VertexSet};
use crate::template::StrategyTemplate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A parsed game file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedGame {
    pub game: StochasticGame,
    pub priorities: PriorityFunction,
    pub names: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Word(String),
    Str(String),
    Comma,
    Semi,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(kind: ParseErrorKind, line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        line,
        col,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            ',' => {
                bump(&mut chars);
                out.push(Spanned {
                    tok: Tok::Comma,
                    line: l,
                    col: k,
                });
            }
            ';' => {
                bump(&mut chars);
                out.push(Spanned {
                    tok: Tok::Semi,
                    line: l,
                    col: k,
                });
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(err(ParseErrorKind::Syntax, l, k, "unterminated name"))
                        }
                        Some(c) => s.push(c),
                    }
                }
                out.push(Spanned {
                    tok: Tok::Str(s),
                    line: l,
                    col: k,
                });
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut s = String::new();
                s.push(bump(&mut chars).expect("peeked"));
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars).expect("peeked"));
                }
                let n = s.parse::<i64>().map_err(|_| {
                    err(
                        ParseErrorKind::Syntax,
                        l,
                        k,
                        format!("malformed number `{s}`"),
                    )
                })?;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: l,
                    col: k,
                });
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump(&mut chars).expect("peeked"));
                }
                out.push(Spanned {
                    tok: Tok::Word(s),
                    line: l,
                    col: k,
                });
            }
            other => {
                return Err(err(
                    ParseErrorKind::Syntax,
                    l,
                    k,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        err(ParseErrorKind::Syntax, l, c, message)
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Spanned {
                tok: Tok::Word(s), ..
            }) if s == w => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(format!("expected `{w}`"))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(i64, usize, usize), ParseError> {
        match self.peek() {
            Some(&Spanned {
                tok: Tok::Int(n),
                line,
                col,
            }) => {
                self.pos += 1;
                Ok((n, line, col))
            }
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn expect_semi(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Spanned { tok: Tok::Semi, .. }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax("expected `;`")),
        }
    }
}

struct Record {
    id: usize,
    priority: u32,
    owner: Owner,
    succ: Vec<(i64, usize, usize)>,
    name: Option<String>,
    line: usize,
    col: usize,
}

/// Parses the game text format.
pub fn parse_game(text: &str) -> Result<ParsedGame, ParseError> {
    let toks = tokenize(text)?;
    let lines = text.split('\n').count();
    let end = (
        lines,
        text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1,
    );
    let mut cur = Cursor { toks, pos: 0, end };
    cur.expect_word("stochastic")?;
    cur.expect_word("parity")?;
    let (n, nl, nc) = cur.expect_int("vertex count")?;
    if n < 0 {
        return Err(err(
            ParseErrorKind::Semantic,
            nl,
            nc,
            "vertex count must be non-negative",
        ));
    }
    let n = n as usize;
    cur.expect_semi()?;

    let mut records: Vec<Record> = Vec::new();
    while cur.peek().is_some() {
        let (id, line, col) = cur.expect_int("vertex id")?;
        let (prio, pl, pc) = cur.expect_int("priority")?;
        let (owner, ol, oc) = cur.expect_int("owner")?;
        let mut succ = Vec::new();
        if !matches!(cur.peek(), Some(Spanned { tok: Tok::Semi, .. })) {
            succ.push(cur.expect_int("successor")?);
            while matches!(
                cur.peek(),
                Some(Spanned {
                    tok: Tok::Comma,
                    ..
                })
            ) {
                cur.next();
                succ.push(cur.expect_int("successor")?);
            }
        }
        let name = match cur.peek() {
            Some(Spanned {
                tok: Tok::Str(s), ..
            }) => {
                let s = s.clone();
                cur.next();
                Some(s)
            }
            _ => None,
        };
        cur.expect_semi()?;
        if id < 0 || id as usize >= n {
            return Err(err(
                ParseErrorKind::Semantic,
                line,
                col,
                format!("vertex id {id} outside 0..{n}"),
            ));
        }
        if prio < 0 || prio > u32::MAX as i64 {
            return Err(err(
                ParseErrorKind::Semantic,
                pl,
                pc,
                format!("priority {prio} must be non-negative"),
            ));
        }
        let owner = u8::try_from(owner)
            .ok()
            .and_then(Owner::from_code)
            .ok_or_else(|| {
                err(
                    ParseErrorKind::Semantic,
                    ol,
                    oc,
                    format!("owner {owner} is not 0, 1 or 2"),
                )
            })?;
        if succ.is_empty() {
            return Err(err(
                ParseErrorKind::Semantic,
                line,
                col,
                format!("vertex {id} has no successors (dead end)"),
            ));
        }
        records.push(Record {
            id: id as usize,
            priority: prio as u32,
            owner,
            succ,
            name,
            line,
            col,
        });
    }

    let mut slots: Vec<Option<Record>> = (0..n).map(|_| None).collect();
    for r in records {
        let (id, line, col) = (r.id, r.line, r.col);
        if slots[id].is_some() {
            return Err(err(
                ParseErrorKind::Semantic,
                line,
                col,
                format!("vertex {id} declared twice"),
            ));
        }
        slots[id] = Some(r);
    }
    if let Some(missing) = slots.iter().position(Option::is_none) {
        let (l, c) = cur.end;
        return Err(err(
            ParseErrorKind::Semantic,
            l,
            c,
            format!("vertex {missing} is never declared"),
        ));
    }
    let records: Vec<Record> = slots.into_iter().map(|r| r.expect("checked")).collect();
    let mut owners = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    let mut priorities = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    for r in records {
        let mut list: Vec<VertexId> = Vec::with_capacity(r.succ.len());
        for &(s, l, c) in &r.succ {
            if s < 0 || s as usize >= n {
                return Err(err(
                    ParseErrorKind::Semantic,
                    l,
                    c,
                    format!("successor {s} of vertex {} is not declared", r.id),
                ));
            }
            let s = VertexId(s as usize);
            if list.contains(&s) {
                return Err(err(
                    ParseErrorKind::Semantic,
                    l,
                    c,
                    format!("successor {s} of vertex {} listed twice", r.id),
                ));
            }
            list.push(s);
        }
        owners.push(r.owner);
        successors.push(list);
        priorities.push(r.priority);
        names.push(r.name);
    }
    let game = StochasticGame::new(owners, successors).map_err(|e| {
        let (l, c) = cur.end;
        err(ParseErrorKind::Semantic, l, c, e.to_string())
    })?;
    Ok(ParsedGame {
        game,
        priorities: PriorityFunction::new(priorities),
        names,
    })
}

/// Writes the game text format, one vertex per line.
pub fn serialize_game(
    game: &StochasticGame,
    priorities: &PriorityFunction,
    names: &[Option<String>],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "stochastic parity {};", game.num_vertices());
    for v in game.vertices() {
        let succ: Vec<String> = game.successors(v).iter().map(|w| w.to_string()).collect();
        let _ = write!(
            out,
            "{} {} {} {}",
            v,
            priorities.get(v),
            game.owner(v).code(),
            succ.join(",")
        );
        if let Some(Some(name)) = names.get(v.0) {
            let _ = write!(out, " \"{name}\"");
        }
        out.push_str(";\n");
    }
    out
}

/// JSON document for a template; edges are `[src, dst]` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateFile {
    #[serde(default)]
    pub prohibited: Vec<[usize; 2]>,
    #[serde(default)]
    pub live_groups: Vec<Vec<[usize; 2]>>,
    #[serde(default)]
    pub colive: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winning_set: Option<Vec<usize>>,
}

fn pair(e: &Edge) -> [usize; 2] {
    [e.src.0, e.dst.0]
}

fn edge(p: &[usize; 2]) -> Edge {
    Edge::new(p[0], p[1])
}

impl TemplateFile {
    pub fn from_template(template: &StrategyTemplate, winning: Option<&VertexSet>) -> Self {
        TemplateFile {
            prohibited: template.prohibited.iter().map(pair).collect(),
            live_groups: template
                .live_groups
                .iter()
                .map(|g| g.iter().map(pair).collect())
                .collect(),
            colive: template.colive.iter().map(pair).collect(),
            winning_set: winning.map(|w| w.iter().map(|v| v.0).collect()),
        }
    }

    pub fn template(&self) -> StrategyTemplate {
        StrategyTemplate {
            prohibited: self.prohibited.iter().map(edge).collect(),
            live_groups: self
                .live_groups
                .iter()
                .map(|g| g.iter().map(edge).collect())
                .collect(),
            colive: self.colive.iter().map(edge).collect(),
        }
    }

    /// Winning set, if present and within range for `game`.
    pub fn winning(&self, game: &StochasticGame) -> Option<Result<VertexSet, GameError>> {
        let ids = self.winning_set.as_ref()?;
        if let Some(&bad) = ids.iter().find(|&&v| v >= game.num_vertices()) {
            return Some(Err(GameError::VertexOutOfRange(VertexId(bad))));
        }
        Some(Ok(game.set_of(ids.iter().map(|&v| VertexId(v)))))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("template files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
