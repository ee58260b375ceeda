//! PGSolver text format.
//!
//! ```text
//! parity <max-id>;
//! <id> <priority> <owner> <succ>(,<succ>)* ("name")?;
//! ```
//!
//! Statements end at `;` and may share or span lines. Ids need not be dense;
//! they are re-indexed in ascending order and the original ids kept.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::families::FamilyLabel;
use crate::game::{ParityGame, Player, Priority};

/// A parsed game together with its original ids and names.
#[derive(Debug, Clone)]
pub struct PgGame {
    pub game: ParityGame,
    /// `ids[v]` is the id position `v` carried in the file.
    pub ids: Vec<usize>,
    pub names: Vec<Option<String>>,
}

struct Statement {
    line: usize,
    body: String,
    name: Option<String>,
}

struct Node {
    line: usize,
    priority: Priority,
    owner: Player,
    successors: Vec<usize>,
    name: Option<String>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Splits `text` into `;`-terminated statements, keeping quoted names intact.
fn statements(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut start = None;
    let mut body = String::new();
    let mut name: Option<String> = None;
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            ';' => {
                if let Some(line) = start.take() {
                    out.push(Statement {
                        line,
                        body: std::mem::take(&mut body),
                        name: name.take(),
                    });
                }
            }
            '"' => {
                let opened = line;
                start.get_or_insert(line);
                if name.is_some() {
                    return Err(parse_error(line, "more than one name"));
                }
                let mut quoted = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(parse_error(opened, "unterminated name"));
                        }
                        Some(q) => quoted.push(q),
                    }
                }
                name = Some(quoted);
            }
            _ => {
                if name.is_some() && !c.is_whitespace() {
                    return Err(parse_error(line, format!("unexpected {c:?} after name")));
                }
                if !c.is_whitespace() {
                    start.get_or_insert(line);
                }
                if c == '\n' {
                    line += 1;
                }
                body.push(c);
            }
        }
    }
    if let Some(line) = start {
        return Err(parse_error(line, "statement is missing its ';'"));
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("{what} {token:?} is not a natural number")))
}

pub fn parse_pgsolver(text: &str) -> Result<PgGame> {
    let mut max_id: Option<usize> = None;
    let mut nodes: BTreeMap<usize, Node> = BTreeMap::new();

    for (i, st) in statements(text)?.into_iter().enumerate() {
        let tokens: Vec<&str> = st.body.split_whitespace().collect();
        if tokens.first() == Some(&"parity") {
            if i > 0 {
                return Err(parse_error(st.line, "header must come first"));
            }
            let [_, max] = tokens[..] else {
                return Err(parse_error(st.line, "header is `parity <max-id>;`"));
            };
            max_id = Some(number(st.line, "max id", max)?);
            continue;
        }
        if tokens.len() < 3 {
            return Err(parse_error(
                st.line,
                "expected `<id> <priority> <owner> <succ>,...`",
            ));
        }
        let id: usize = number(st.line, "id", tokens[0])?;
        let priority: Priority = number(st.line, "priority", tokens[1])?;
        let owner = match tokens[2] {
            "0" => Player::Even,
            "1" => Player::Odd,
            other => {
                return Err(parse_error(
                    st.line,
                    format!("owner {other:?} is not 0 or 1"),
                ))
            }
        };
        let joined = tokens[3..].concat();
        if joined.is_empty() {
            return Err(Error::NotLeftTotal(id));
        }
        let successors = joined
            .split(',')
            .map(|t| number(st.line, "successor", t))
            .collect::<Result<Vec<usize>>>()?;
        if max_id.is_some_and(|m| id > m) {
            return Err(parse_error(
                st.line,
                format!("id {id} exceeds the header's max id"),
            ));
        }
        let node = Node {
            line: st.line,
            priority,
            owner,
            successors,
            name: st.name,
        };
        if nodes.insert(id, node).is_some() {
            return Err(parse_error(st.line, format!("id {id} declared twice")));
        }
    }

    let ids: Vec<usize> = nodes.keys().copied().collect();
    let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(v, &id)| (id, v)).collect();
    let mut owner = Vec::with_capacity(ids.len());
    let mut priority = Vec::with_capacity(ids.len());
    let mut successors = Vec::with_capacity(ids.len());
    let mut names = Vec::with_capacity(ids.len());
    for node in nodes.into_values() {
        let succ =
            node.successors
                .iter()
                .map(|s| {
                    index.get(s).copied().ok_or_else(|| {
                        parse_error(node.line, format!("successor {s} is not declared"))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
        owner.push(node.owner);
        priority.push(node.priority);
        successors.push(succ);
        names.push(node.name);
    }
    let labels = names
        .iter()
        .map(|n| n.as_deref().and_then(|s| s.parse::<FamilyLabel>().ok()))
        .collect();
    let game = ParityGame::new(owner, priority, successors)?.with_labels(labels)?;
    Ok(PgGame { game, ids, names })
}

/// Ids `0..n` ascending, one position per line, family labels as names.
pub fn write_pgsolver(g: &ParityGame) -> String {
    let mut out = String::new();
    if g.is_empty() {
        return out;
    }
    let _ = writeln!(out, "parity {};", g.len() - 1);
    for v in 0..g.len() {
        let succ: Vec<String> = g.successors(v).iter().map(usize::to_string).collect();
        let _ = write!(
            out,
            "{} {} {} {}",
            v,
            g.priority(v),
            g.owner(v),
            succ.join(",")
        );
        if let Some(label) = g.label(v) {
            let _ = write!(out, " \"{label}\"");
        }
        out.push_str(";\n");
    }
    out
}
