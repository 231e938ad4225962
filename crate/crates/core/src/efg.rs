//! Gambit-style `.efg` text (revision 2, node kinds `c`, `p`, `t`) and a JSON
//! mirror of [`GameTree`].

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::game::{GameError, GameTree, NodeKind, NodeSpec};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EfgError {
    #[error("line {line}, column {col}: {msg}")]
    Lexical { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported format revision {0} (only 2 is supported)")]
    UnsupportedVersion(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("info set merge conflict: player {player} info set {number} declared with actions {first:?} and {second:?}")]
    MergeConflict { player: usize, number: usize, first: Vec<String>, second: Vec<String> },
    #[error("outcome {0} reused with different payoffs")]
    OutcomeConflict(usize),
    #[error("line {0}: outcome payoffs on non-terminal nodes are not supported")]
    NonTerminalOutcome(usize),
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Str(String),
    Word(String),
    Open,
    Close,
    Comma,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, EfgError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let advance = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut line, &mut col);
            continue;
        }
        match c {
            '{' | '}' | ',' => {
                chars.next();
                advance(c, &mut line, &mut col);
                let tok = match c {
                    '{' => Tok::Open,
                    '}' => Tok::Close,
                    _ => Tok::Comma,
                };
                out.push(Token { tok, line: l0, col: c0 });
            }
            '"' => {
                chars.next();
                advance(c, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    let Some(ch) = chars.next() else {
                        return Err(EfgError::Lexical { line: l0, col: c0, msg: "unterminated string".into() });
                    };
                    advance(ch, &mut line, &mut col);
                    match ch {
                        '"' => break,
                        '\\' => {
                            let Some(esc) = chars.next() else {
                                return Err(EfgError::Lexical { line, col, msg: "dangling escape".into() });
                            };
                            advance(esc, &mut line, &mut col);
                            s.push(esc);
                        }
                        _ => s.push(ch),
                    }
                }
                out.push(Token { tok: Tok::Str(s), line: l0, col: c0 });
            }
            _ if c.is_ascii_alphanumeric() || "+-./".contains(c) => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_alphanumeric() || "+-./".contains(ch) {
                        s.push(ch);
                        chars.next();
                        advance(ch, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Word(s), line: l0, col: c0 });
            }
            _ => {
                return Err(EfgError::Lexical { line: l0, col: c0, msg: format!("unexpected character '{}'", c) });
            }
        }
    }
    Ok(out)
}

struct Parser<T> {
    toks: Vec<Token>,
    pos: usize,
    players: usize,
    isets: HashMap<(usize, usize), Vec<String>>,
    outcomes: HashMap<usize, Vec<T>>,
}

impl<T: Scalar> Parser<T> {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |t| t.line)
    }

    fn syntax(&self, msg: impl Into<String>) -> EfgError {
        let col = self.toks.get(self.pos).map(|t| t.col);
        let msg = match col {
            Some(c) => format!("column {}: {}", c, msg.into()),
            None => msg.into(),
        };
        EfgError::Syntax { line: self.line(), msg }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Result<Tok, EfgError> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone()).ok_or_else(|| self.syntax("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn string(&mut self) -> Result<String, EfgError> {
        match self.next()? {
            Tok::Str(s) => Ok(s),
            t => {
                self.pos -= 1;
                Err(self.syntax(format!("expected quoted string, found {:?}", t)))
            }
        }
    }

    fn word(&mut self) -> Result<String, EfgError> {
        match self.next()? {
            Tok::Word(s) => Ok(s),
            t => {
                self.pos -= 1;
                Err(self.syntax(format!("expected a word or number, found {:?}", t)))
            }
        }
    }

    fn usize(&mut self) -> Result<usize, EfgError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.syntax(format!("expected a non-negative integer, found '{}'", w)))
    }

    fn number(&mut self) -> Result<T, EfgError> {
        let w = self.word()?;
        T::parse_number(&w).ok_or_else(|| self.syntax(format!("bad number '{}'", w)))
    }

    fn expect(&mut self, want: Tok) -> Result<(), EfgError> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.syntax(format!("expected {:?}, found {:?}", want, t)))
        }
    }

    fn header(&mut self) -> Result<(String, Vec<String>, Option<String>), EfgError> {
        let tag = self.word()?;
        if tag != "EFG" {
            return Err(self.syntax("missing EFG header"));
        }
        let rev = self.word()?;
        if rev != "2" {
            return Err(EfgError::UnsupportedVersion(rev));
        }
        let r = self.word()?;
        if r != "R" {
            return Err(self.syntax(format!("expected 'R', found '{}'", r)));
        }
        let title = self.string()?;
        self.expect(Tok::Open)?;
        let mut players = Vec::new();
        while let Some(Tok::Str(_)) = self.peek() {
            players.push(self.string()?);
        }
        self.expect(Tok::Close)?;
        let comment = match self.peek() {
            Some(Tok::Str(_)) => Some(self.string()?),
            _ => None,
        };
        Ok((title, players, comment))
    }

    /// Trailing `<outcome#>` on c/p lines; anything but 0 is rejected.
    fn no_outcome(&mut self) -> Result<(), EfgError> {
        let line = self.line();
        let n = self.usize()?;
        if n != 0 {
            return Err(EfgError::NonTerminalOutcome(line));
        }
        Ok(())
    }

    fn payoffs(&mut self) -> Result<Vec<T>, EfgError> {
        self.expect(Tok::Open)?;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Comma) => self.pos += 1,
                _ => out.push(self.number()?),
            }
        }
        Ok(out)
    }

    fn children(&mut self, count: usize, what: &str) -> Result<Vec<NodeSpec<T>>, EfgError> {
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if self.peek().is_none() {
                return Err(EfgError::Arity(format!("{} declares {} actions but only {} subtrees follow", what, count, k)));
            }
            out.push(self.node()?);
        }
        Ok(out)
    }

    fn node(&mut self) -> Result<NodeSpec<T>, EfgError> {
        let line = self.line();
        let kind = self.word()?;
        match kind.as_str() {
            "t" => {
                let label = self.string()?;
                let outcome = self.usize()?;
                let name = match self.peek() {
                    Some(Tok::Str(_)) => self.string()?,
                    _ => String::new(),
                };
                let payoffs = match self.peek() {
                    Some(Tok::Open) => Some(self.payoffs()?),
                    _ => None,
                };
                let payoffs = match (payoffs, outcome) {
                    (Some(p), 0) => p,
                    (None, 0) => vec![T::zero(); self.players],
                    (Some(p), n) => {
                        if let Some(prev) = self.outcomes.get(&n) {
                            if *prev != p {
                                return Err(EfgError::OutcomeConflict(n));
                            }
                        }
                        self.outcomes.insert(n, p.clone());
                        p
                    }
                    (None, n) => self
                        .outcomes
                        .get(&n)
                        .cloned()
                        .ok_or_else(|| EfgError::Syntax { line, msg: format!("outcome {} has no payoffs", n) })?,
                };
                if payoffs.len() != self.players {
                    return Err(EfgError::Syntax {
                        line,
                        msg: format!("{} payoffs for {} players", payoffs.len(), self.players),
                    });
                }
                Ok(NodeSpec::Terminal { label, outcome, name, payoffs })
            }
            "c" => {
                let label = self.string()?;
                let number = self.usize()?;
                let name = self.string()?;
                self.expect(Tok::Open)?;
                let mut acts = Vec::new();
                while let Some(Tok::Str(_)) = self.peek() {
                    let a = self.string()?;
                    let p = self.number()?;
                    acts.push((a, p));
                }
                self.expect(Tok::Close)?;
                self.no_outcome()?;
                let kids = self.children(acts.len(), &format!("chance node on line {}", line))?;
                Ok(NodeSpec::Chance {
                    label,
                    number,
                    name,
                    branches: acts.into_iter().zip(kids).map(|((a, p), k)| (a, p, k)).collect(),
                })
            }
            "p" => {
                let label = self.string()?;
                let player = self.usize()?;
                if player == 0 || player > self.players {
                    return Err(EfgError::Syntax { line, msg: format!("player {} not declared", player) });
                }
                let number = self.usize()?;
                let name = self.string()?;
                self.expect(Tok::Open)?;
                let mut acts = Vec::new();
                while let Some(Tok::Str(_)) = self.peek() {
                    acts.push(self.string()?);
                }
                self.expect(Tok::Close)?;
                self.no_outcome()?;
                match self.isets.get(&(player, number)) {
                    Some(prev) if *prev != acts => {
                        return Err(EfgError::MergeConflict { player, number, first: prev.clone(), second: acts });
                    }
                    Some(_) => {}
                    None => {
                        self.isets.insert((player, number), acts.clone());
                    }
                }
                let kids = self.children(acts.len(), &format!("player node on line {}", line))?;
                Ok(NodeSpec::Decision {
                    label,
                    player: player - 1,
                    number,
                    name,
                    branches: acts.into_iter().zip(kids).collect(),
                })
            }
            other => Err(EfgError::Syntax { line, msg: format!("unknown node kind '{}'", other) }),
        }
    }
}

pub fn parse_efg<T: Scalar>(text: &str) -> Result<GameTree<T>, EfgError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, players: 0, isets: HashMap::new(), outcomes: HashMap::new() };
    let (title, players, comment) = p.header()?;
    p.players = players.len();
    let root = p.node()?;
    if p.pos < p.toks.len() {
        return Err(EfgError::Arity(format!("nodes remain after the tree is complete (line {})", p.line())));
    }
    Ok(GameTree::new(&title, players, root)?.with_comment(comment))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Deterministic `.efg` text: one node per line in preorder.
pub fn write_efg<T: Scalar>(game: &GameTree<T>) -> String {
    let mut out = String::new();
    let players: Vec<String> = game.players().iter().map(|p| quote(p)).collect();
    let _ = writeln!(out, "EFG 2 R {} {{ {} }}", quote(&game.title), players.join(" "));
    if let Some(c) = &game.comment {
        let _ = writeln!(out, "{}", quote(c));
    }
    out.push('\n');
    for node in game.nodes() {
        match &node.kind {
            NodeKind::Chance { number, name, actions, probs } => {
                let acts: Vec<String> =
                    actions.iter().zip(probs).map(|(a, p)| format!("{} {}", quote(a), p.to_probability_string())).collect();
                let _ = writeln!(out, "c {} {} {} {{ {} }} 0", quote(&node.label), number, quote(name), acts.join(" "));
            }
            NodeKind::Decision { player, infoset, actions } => {
                let info = game.infoset(*infoset);
                let acts: Vec<String> = actions.iter().map(|a| quote(a)).collect();
                let _ = writeln!(
                    out,
                    "p {} {} {} {} {{ {} }} 0",
                    quote(&node.label),
                    player + 1,
                    info.number,
                    quote(&info.name),
                    acts.join(" ")
                );
            }
            NodeKind::Terminal { outcome, name, payoffs } => {
                let pay: Vec<String> = payoffs.iter().map(|u| u.to_efg_string()).collect();
                let _ = writeln!(out, "t {} {} {} {{ {} }}", quote(&node.label), outcome, quote(name), pay.join(", "));
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonGame {
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub players: Vec<String>,
    pub infosets: Vec<JsonInfoSet>,
    pub nodes: Vec<JsonNode>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonInfoSet {
    pub id: usize,
    #[serde(with = "crate::game::one_based")]
    pub player: usize,
    pub number: usize,
    pub name: String,
    pub actions: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum JsonNode {
    Chance {
        id: usize,
        label: String,
        number: usize,
        name: String,
        actions: Vec<String>,
        probs: Vec<String>,
        children: Vec<usize>,
    },
    Decision {
        id: usize,
        label: String,
        infoset: usize,
        actions: Vec<String>,
        children: Vec<usize>,
    },
    Terminal {
        id: usize,
        label: String,
        outcome: usize,
        name: String,
        payoffs: Vec<String>,
    },
}

impl JsonNode {
    fn id(&self) -> usize {
        match self {
            JsonNode::Chance { id, .. } | JsonNode::Decision { id, .. } | JsonNode::Terminal { id, .. } => *id,
        }
    }
}

pub fn to_json_value<T: Scalar>(game: &GameTree<T>) -> JsonGame {
    let infosets = game
        .infosets()
        .iter()
        .map(|i| JsonInfoSet {
            id: i.id,
            player: i.player,
            number: i.number,
            name: i.name.clone(),
            actions: i.actions.clone(),
        })
        .collect();
    let nodes = game
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, n)| match &n.kind {
            NodeKind::Chance { number, name, actions, probs } => JsonNode::Chance {
                id,
                label: n.label.clone(),
                number: *number,
                name: name.clone(),
                actions: actions.clone(),
                probs: probs.iter().map(|p| p.to_probability_string()).collect(),
                children: n.children.clone(),
            },
            NodeKind::Decision { infoset, actions, .. } => JsonNode::Decision {
                id,
                label: n.label.clone(),
                infoset: *infoset,
                actions: actions.clone(),
                children: n.children.clone(),
            },
            NodeKind::Terminal { outcome, name, payoffs } => JsonNode::Terminal {
                id,
                label: n.label.clone(),
                outcome: *outcome,
                name: name.clone(),
                payoffs: payoffs.iter().map(|u| u.to_efg_string()).collect(),
            },
        })
        .collect();
    JsonGame {
        title: game.title.clone(),
        comment: game.comment.clone(),
        players: game.players().to_vec(),
        infosets,
        nodes,
    }
}

pub fn to_json<T: Scalar>(game: &GameTree<T>) -> String {
    serde_json::to_string_pretty(&to_json_value(game)).expect("serializable")
}

pub fn from_json<T: Scalar>(text: &str) -> Result<GameTree<T>, EfgError> {
    let doc: JsonGame = serde_json::from_str(text).map_err(|e| EfgError::Json(e.to_string()))?;
    from_json_value(&doc)
}

pub fn from_json_value<T: Scalar>(doc: &JsonGame) -> Result<GameTree<T>, EfgError> {
    let schema = |m: String| EfgError::Json(m);
    let by_id: HashMap<usize, &JsonNode> = doc.nodes.iter().map(|n| (n.id(), n)).collect();
    if by_id.len() != doc.nodes.len() {
        return Err(schema("duplicate node ids".into()));
    }
    let isets: HashMap<usize, &JsonInfoSet> = doc.infosets.iter().map(|i| (i.id, i)).collect();
    if !by_id.contains_key(&0) {
        return Err(schema("missing root node 0".into()));
    }
    let num = |s: &str| T::parse_number(s).ok_or_else(|| schema(format!("bad number '{}'", s)));
    let mut seen = HashSet::new();

    fn build<T: Scalar>(
        id: usize,
        by_id: &HashMap<usize, &JsonNode>,
        isets: &HashMap<usize, &JsonInfoSet>,
        seen: &mut HashSet<usize>,
        num: &dyn Fn(&str) -> Result<T, EfgError>,
    ) -> Result<NodeSpec<T>, EfgError> {
        let node = by_id.get(&id).ok_or_else(|| EfgError::Json(format!("node references missing child id {}", id)))?;
        if !seen.insert(id) {
            return Err(EfgError::Json(format!("node {} reached twice", id)));
        }
        let kids = |children: &Vec<usize>, arity: usize, seen: &mut HashSet<usize>| -> Result<Vec<NodeSpec<T>>, EfgError> {
            if children.len() != arity {
                return Err(EfgError::Json(format!("node {} has {} children for {} actions", id, children.len(), arity)));
            }
            children.iter().map(|&c| build(c, by_id, isets, seen, num)).collect()
        };
        Ok(match node {
            JsonNode::Terminal { label, outcome, name, payoffs, .. } => NodeSpec::Terminal {
                label: label.clone(),
                outcome: *outcome,
                name: name.clone(),
                payoffs: payoffs.iter().map(|p| num(p)).collect::<Result<_, _>>()?,
            },
            JsonNode::Chance { label, number, name, actions, probs, children, .. } => {
                if probs.len() != actions.len() {
                    return Err(EfgError::Json(format!("node {} has {} probabilities for {} actions", id, probs.len(), actions.len())));
                }
                let ks = kids(children, actions.len(), seen)?;
                let mut branches = Vec::new();
                for ((a, p), k) in actions.iter().zip(probs).zip(ks) {
                    branches.push((a.clone(), num(p)?, k));
                }
                NodeSpec::Chance { label: label.clone(), number: *number, name: name.clone(), branches }
            }
            JsonNode::Decision { label, infoset, actions, children, .. } => {
                let info = isets.get(infoset).ok_or_else(|| EfgError::Json(format!("node {} references missing info set {}", id, infoset)))?;
                let ks = kids(children, actions.len(), seen)?;
                NodeSpec::Decision {
                    label: label.clone(),
                    player: info.player,
                    number: info.number,
                    name: info.name.clone(),
                    branches: actions.iter().cloned().zip(ks).collect(),
                }
            }
        })
    }

    let root = build(0, &by_id, &isets, &mut seen, &num)?;
    if seen.len() != doc.nodes.len() {
        return Err(schema("unreachable nodes present".into()));
    }
    Ok(GameTree::new(&doc.title, doc.players.clone(), root)?.with_comment(doc.comment.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEAF: &str = "EFG 2 R \"g\" { \"P1\" \"P2\" }\nt \"\" 1 \"\" { 3, -3 }\n";

    #[test]
    fn single_leaf_round_trip() {
        let g: GameTree<f64> = parse_efg(LEAF).unwrap();
        assert_eq!(g.nodes().len(), 1);
        let text = write_efg(&g);
        assert_eq!(text.lines().filter(|l| !l.is_empty()).count(), 2);
        assert_eq!(parse_efg::<f64>(&text).unwrap(), g);
    }

    #[test]
    fn bad_probabilities_parse_but_fail_validation() {
        let text = "EFG 2 R \"g\" { \"A\" }\nc \"\" 1 \"\" { \"a\" 0.5 \"b\" 0.6 } 0\nt \"\" 1 \"\" { 1 }\nt \"\" 2 \"\" { 2 }\n";
        let g: GameTree<f64> = parse_efg(text).unwrap();
        assert_eq!(g.validate().violations.len(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_efg::<f64>("EFG 3 R \"g\" { \"A\" }\nt \"\" 1 \"\" { 1 }"), Err(EfgError::UnsupportedVersion(_))));
        assert!(matches!(parse_efg::<f64>("EFG 2 R \"g\" { \"A\" }\nt \"\" 1 \"\" { 1 } ?"), Err(EfgError::Lexical { line: 2, col: 17, .. })));
        let short = "EFG 2 R \"g\" { \"A\" }\np \"\" 1 1 \"\" { \"a\" \"b\" } 0\nt \"\" 1 \"\" { 1 }\n";
        assert!(matches!(parse_efg::<f64>(short), Err(EfgError::Arity(_))));
        let clash = "EFG 2 R \"g\" { \"A\" }\nc \"\" 1 \"\" { \"x\" 1/2 \"y\" 1/2 } 0\np \"\" 1 1 \"\" { \"a\" } 0\nt \"\" 1 \"\" { 1 }\np \"\" 1 1 \"\" { \"b\" } 0\nt \"\" 2 \"\" { 2 }\n";
        assert!(matches!(parse_efg::<f64>(clash), Err(EfgError::MergeConflict { .. })));
        let outcome = "EFG 2 R \"g\" { \"A\" }\np \"\" 1 1 \"\" { \"a\" } 3 { 1 }\nt \"\" 1 \"\" { 1 }\n";
        assert!(matches!(parse_efg::<f64>(outcome), Err(EfgError::NonTerminalOutcome(2))));
    }

    #[test]
    fn escaped_quotes_survive() {
        let text = "EFG 2 R \"say \\\"hi\\\"\" { \"A\" }\n\"a comment\"\nt \"\" 1 \"\" { 1 }\n";
        let g: GameTree<f64> = parse_efg(text).unwrap();
        assert_eq!(g.title, "say \"hi\"");
        assert_eq!(g.comment.as_deref(), Some("a comment"));
        assert_eq!(parse_efg::<f64>(&write_efg(&g)).unwrap(), g);
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        let g: GameTree<f64> = parse_efg(LEAF).unwrap();
        let text = to_json(&g);
        assert_eq!(from_json::<f64>(&text).unwrap(), g);
        let broken = r#"{"title":"g","players":["A"],"infosets":[],"nodes":[
            {"kind":"chance","id":0,"label":"","number":1,"name":"","actions":["a"],"probs":["1"],"children":[7]}]}"#;
        assert!(matches!(from_json::<f64>(broken), Err(EfgError::Json(m)) if m.contains("missing child")));
    }

    #[test]
    fn rational_payoffs_are_exact() {
        use crate::scalar::Rational;
        let text = "EFG 2 R \"g\" { \"A\" }\nt \"\" 1 \"\" { 1/3 }\n";
        let g: GameTree<Rational> = parse_efg(text).unwrap();
        assert!(write_efg(&g).contains("{ 1/3 }"));
    }
}
