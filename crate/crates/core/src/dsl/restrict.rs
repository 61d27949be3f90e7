use num_traits::Zero;

use super::strip_comment;
use crate::belief::{Clause, PlayerView, RestrictionProfile};
use crate::error::{Error, Pos, Result};
use crate::game::{Game, PlayerId};
use crate::lp::Relation;
use crate::num::{parse_rational, Q};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

const SYMBOLS: [&str; 14] = [">=", "<=", "@", ":", "(", ")", "[", "]", ",", "+", "-", "*", "=", "/"];

fn lex(line_no: usize, line: &str) -> Result<Vec<Token>> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' || d == '.' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Word(line[start..i].to_string()), col: start + 1 });
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push(Token { tok: Tok::Num(line[start..i].to_string()), col: start + 1 });
            continue;
        }
        for s in SYMBOLS {
            if line[i..].starts_with(s) {
                out.push(Token { tok: Tok::Sym(s), col: i + 1 });
                i += s.len();
                continue 'outer;
            }
        }
        return Err(Error::syntax(line_no, i + 1, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    game: &'a Game,
    view: &'a PlayerView,
    line: usize,
    toks: Vec<Token>,
    at: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.toks.get(self.at).map(|t| t.col).unwrap_or(self.end_col),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos(), message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.peek_sym(s) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn word(&mut self) -> Result<(String, Pos)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.at += 1;
                Ok((w, pos))
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn number(&mut self) -> Result<Q> {
        let neg = if self.peek_sym("-") {
            self.at += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(self.err("expected a number"));
        };
        self.at += 1;
        let mut text = n;
        if self.peek_sym("/") {
            self.at += 1;
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return Err(self.err("expected a denominator"));
            };
            self.at += 1;
            text = format!("{text}/{d}");
        }
        let v = parse_rational(&text).ok_or_else(|| self.err(format!("bad number `{text}`")))?;
        Ok(if neg { -v } else { v })
    }

    fn player(&mut self) -> Result<PlayerId> {
        let (name, pos) = self.word()?;
        let j = self
            .game
            .player_index(&name)
            .ok_or(Error::UnknownIdentifier { pos, name: name.clone() })?;
        if j == self.view.player {
            return Err(Error::Syntax {
                pos,
                message: format!("an event may only mention opponents, not `{name}`"),
            });
        }
        Ok(j)
    }

    /// Event as a mask over the declaring player's opponent profiles.
    fn event(&mut self) -> Result<Vec<bool>> {
        let mut acc = self.conjunction()?;
        while self.peek_word("or") {
            self.at += 1;
            let rhs = self.conjunction()?;
            acc.iter_mut().zip(rhs).for_each(|(a, b)| *a = *a || b);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Vec<bool>> {
        let mut acc = self.atom()?;
        while self.peek_word("and") {
            self.at += 1;
            let rhs = self.atom()?;
            acc.iter_mut().zip(rhs).for_each(|(a, b)| *a = *a && b);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Vec<bool>> {
        let size = self.view.size;
        if self.peek_sym("(") {
            self.at += 1;
            let e = self.event()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        if self.peek_word("not") {
            self.at += 1;
            return Ok(self.atom()?.into_iter().map(|b| !b).collect());
        }
        if self.peek_word("true") {
            self.at += 1;
            return Ok(vec![true; size]);
        }
        if self.peek_word("reach") {
            self.at += 1;
            self.expect_sym("(")?;
            let (name, pos) = self.word()?;
            let x = self.game.node_index(&name).ok_or(Error::UnknownIdentifier { pos, name })?;
            self.expect_sym(")")?;
            let view = self.view;
            return Ok((0..size)
                .map(|k| {
                    view.others
                        .iter()
                        .zip(view.opponents_of(k))
                        .all(|(&j, &s)| self.game.node_reach(x, j)[s])
                })
                .collect());
        }
        let j = self.player()?;
        let game = self.game;
        let view = self.view;
        let strat_mask: Vec<bool> = if self.peek_sym("@") {
            self.at += 1;
            let (hname, hpos) = self.word()?;
            let h = game
                .infoset_index(&hname)
                .filter(|&h| game.infoset(h).owner == j)
                .ok_or(Error::UnknownInfoset { pos: hpos, name: hname })?;
            self.expect_sym("=")?;
            let (a, apos) = self.word()?;
            let ai = game.infoset(h).actions.iter().position(|x| *x == a).ok_or(Error::UnknownIdentifier { pos: apos, name: a })?;
            (0..game.num_strategies(j)).map(|s| game.action_at(s, h) == ai).collect()
        } else if self.peek_sym("=") {
            self.at += 1;
            let (a, apos) = self.word()?;
            let owners: Vec<_> = game
                .infosets_of(j)
                .iter()
                .copied()
                .filter(|&h| game.infoset(h).actions.contains(&a))
                .collect();
            match owners.as_slice() {
                [h] => {
                    let ai = game.infoset(*h).actions.iter().position(|x| *x == a).expect("present");
                    (0..game.num_strategies(j)).map(|s| game.action_at(s, *h) == ai).collect()
                }
                [] => return Err(Error::UnknownIdentifier { pos: apos, name: a }),
                _ => {
                    return Err(Error::Syntax {
                        pos: apos,
                        message: format!("action `{a}` is ambiguous; write Player@infoset = {a}"),
                    })
                }
            }
        } else if self.peek_word("in") {
            self.at += 1;
            self.expect_sym("[")?;
            let mut mask = vec![false; game.num_strategies(j)];
            loop {
                let (s, spos) = self.word()?;
                let si = game.strategy_index(j, &s).ok_or(Error::UnknownIdentifier { pos: spos, name: s })?;
                mask[si] = true;
                if self.peek_sym(",") {
                    self.at += 1;
                } else {
                    break;
                }
            }
            self.expect_sym("]")?;
            mask
        } else {
            return Err(self.err("expected `@`, `=` or `in`"));
        };
        Ok((0..size).map(|k| strat_mask[view.strategy_of(k, j)]).collect())
    }

    /// `[c [*]] P(event)` terms joined by `+` / `-`.
    fn combination(&mut self) -> Result<Vec<Q>> {
        let mut coefs = vec![Q::zero(); self.view.size];
        let mut sign = Q::from_integer(1.into());
        if self.peek_sym("-") {
            self.at += 1;
            sign = -sign;
        }
        loop {
            let c = if matches!(self.peek(), Some(Tok::Num(_))) {
                let v = self.number()?;
                if self.peek_sym("*") {
                    self.at += 1;
                }
                v
            } else {
                Q::from_integer(1.into())
            };
            if !self.peek_word("P") {
                return Err(self.err("expected `P(`"));
            }
            self.at += 1;
            self.expect_sym("(")?;
            let ev = self.event()?;
            self.expect_sym(")")?;
            let w = &sign * c;
            for (k, inside) in ev.into_iter().enumerate() {
                if inside {
                    coefs[k] += &w;
                }
            }
            if self.peek_sym("+") {
                self.at += 1;
                sign = Q::from_integer(1.into());
            } else if self.peek_sym("-") {
                self.at += 1;
                sign = Q::from_integer((-1).into());
            } else {
                return Ok(coefs);
            }
        }
    }
}

/// Parses a `.restrict` file against `game`.
///
/// ```text
/// [restrictions]
/// Ann @ a1 : P(Bob@b1 = R) = 1
/// Cleo @ c0 : P(Ann@aO = S and Bob@bO = E) >= 1/2
/// ```
pub fn parse_restrictions(text: &str, game: &Game) -> Result<RestrictionProfile> {
    let views: Vec<PlayerView> = (0..game.num_players()).map(|i| PlayerView::new(game, i)).collect();
    let mut profile = RestrictionProfile::unrestricted(game);
    let mut in_section = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('[') {
            if t != "[restrictions]" {
                return Err(Error::syntax(line_no, super::column_of(line, t), format!("unknown section `{t}`")));
            }
            in_section = true;
            continue;
        }
        if !in_section {
            return Err(Error::syntax(line_no, super::column_of(line, t), "expected the [restrictions] header"));
        }
        let toks = lex(line_no, line)?;
        let Some(Token { tok: Tok::Word(pname), col }) = toks.first().cloned() else {
            return Err(Error::syntax(line_no, super::column_of(line, t), "expected a player name"));
        };
        let i = game.player_index(&pname).ok_or(Error::UnknownIdentifier {
            pos: Pos { line: line_no, column: col },
            name: pname.clone(),
        })?;
        let mut p = Parser { game, view: &views[i], line: line_no, toks, at: 1, end_col: line.len() + 1 };
        p.expect_sym("@")?;
        let (hname, hpos) = p.word()?;
        let h = game
            .infoset_index(&hname)
            .filter(|&h| game.infoset(h).owner == i)
            .ok_or(Error::UnknownInfoset { pos: hpos, name: hname })?;
        p.expect_sym(":")?;
        let clause_pos = p.pos();
        let coefs = p.combination()?;
        let rel = if p.peek_sym("=") {
            Relation::Eq
        } else if p.peek_sym(">=") {
            Relation::Ge
        } else if p.peek_sym("<=") {
            Relation::Le
        } else {
            return Err(p.err("expected `=`, `>=` or `<=`"));
        };
        p.at += 1;
        let rhs = p.number()?;
        if p.at != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        let ev = &views[i].event_masks[views[i].event_of(h)];
        let clause = Clause {
            infoset: h,
            coefs: coefs
                .into_iter()
                .enumerate()
                .filter(|(k, c)| ev[*k] && !c.is_zero())
                .collect(),
            rel,
            rhs,
            text: t.to_string(),
        };
        if !clause.satisfiable(&views[i]) {
            return Err(Error::InfeasibleClause { pos: clause_pos, clause: t.to_string() });
        }
        profile.push(i, clause);
    }
    Ok(profile)
}
