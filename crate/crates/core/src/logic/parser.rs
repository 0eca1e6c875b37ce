use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::Formula;
use super::word::UltimatelyPeriodicWord;

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    Next,
    Finally,
    Globally,
    Prompt,
    Until,
    Release,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '!' => {
                toks.push((i, Tok::Not));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::And));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Or));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Implies));
                    i += 2;
                } else {
                    return err(i, "expected '->'");
                }
            }
            'a'..='z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &input[start..i];
                // An identifier must not run into an uppercase letter.
                match word {
                    "true" => toks.push((start, Tok::True)),
                    "false" => toks.push((start, Tok::False)),
                    _ => toks.push((start, Tok::Ident(word.to_string()))),
                }
            }
            'A'..='Z' => {
                // Uppercase runs are operator words, split greedily with the
                // longest operator first: "GFP" lexes as G, FP.
                let start = i;
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_uppercase() {
                    j += 1;
                }
                let mut k = start;
                while k < j {
                    let rest = &input[k..j];
                    let (tok, len) = if rest.starts_with("FP") {
                        (Tok::Prompt, 2)
                    } else if rest.starts_with('F') {
                        (Tok::Finally, 1)
                    } else if rest.starts_with('G') {
                        (Tok::Globally, 1)
                    } else if rest.starts_with('X') {
                        (Tok::Next, 1)
                    } else if rest.starts_with('U') {
                        (Tok::Until, 1)
                    } else if rest.starts_with('R') {
                        (Tok::Release, 1)
                    } else {
                        return err(k, format!("unknown operator '{}'", &rest[..1]));
                    };
                    toks.push((k, tok));
                    k += len;
                }
                i = j;
            }
            _ => return err(i, format!("unexpected character '{c}'")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    // implies := or ("->" or)?
    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            let at = self.offset();
            self.bump();
            let rhs = self.or()?;
            return match Formula::implies(lhs, rhs) {
                Ok(f) => Ok(f),
                Err(e) => err(at, e.to_string()),
            };
        }
        Ok(lhs)
    }

    // or := and ("|" and)*
    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    // and := temporal ("&" temporal)*
    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.temporal()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    // temporal := unary (("U" | "R") temporal)?   (right associative)
    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Until) => {
                self.bump();
                let rhs = self.temporal()?;
                Ok(Formula::until(lhs, rhs))
            }
            Some(Tok::Release) => {
                self.bump();
                let rhs = self.temporal()?;
                Ok(Formula::release(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    // unary := ("!" | "X" | "F" | "G" | "FP") unary | atom
    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                let f = self.unary()?;
                match f.negated() {
                    Ok(g) => Ok(g),
                    Err(e) => err(at, e.to_string()),
                }
            }
            Some(Tok::Next) => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Some(Tok::Finally) => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Some(Tok::Globally) => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Some(Tok::Prompt) => {
                self.bump();
                Ok(Formula::prompt_eventually(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::True) => Ok(Formula::True),
            Some(Tok::False) => Ok(Formula::False),
            Some(Tok::Ident(name)) => Ok(Formula::Atom(name)),
            Some(Tok::LParen) => {
                let f = self.implies()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(f),
                    _ => err(at, "unclosed '('"),
                }
            }
            Some(t) => err(at, format!("unexpected token {t:?}")),
            None => err(at, "unexpected end of input"),
        }
    }
}

/// Parse a formula and return it in negation normal form.
///
/// `F`, `G`, `->`, `true` and `false` are accepted as sugar; negation is
/// pushed to the atoms during parsing. Negating a prompt eventuality is
/// reported as an error.
pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
    };
    let f = p.implies()?;
    if p.pos != p.toks.len() {
        return err(p.offset(), "trailing input after formula");
    }
    Ok(f)
}

/// Parse an ultimately periodic word literal: `step* ; step+` where a step is
/// `{a,b}` or `{}`. The part before `;` is the finite prefix, the part after
/// repeats forever.
pub fn parse_word(input: &str) -> Result<UltimatelyPeriodicWord, ParseError> {
    let semi = match input.find(';') {
        Some(i) => i,
        None => return err(input.len(), "word literal needs ';' before the loop"),
    };
    let prefix = parse_steps(&input[..semi], 0)?;
    let loop_part = parse_steps(&input[semi + 1..], semi + 1)?;
    if loop_part.is_empty() {
        return err(semi, "loop part must contain at least one step");
    }
    let mut props: BTreeSet<String> = BTreeSet::new();
    for step in prefix.iter().chain(loop_part.iter()) {
        props.extend(step.iter().cloned());
    }
    Ok(UltimatelyPeriodicWord::new(
        props.into_iter().collect::<Vec<_>>(),
        prefix,
        loop_part,
    ))
}

fn parse_steps(input: &str, base: usize) -> Result<Vec<BTreeSet<String>>, ParseError> {
    let bytes = input.as_bytes();
    let mut steps = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] as char {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '{' => {
                let close = match input[i..].find('}') {
                    Some(off) => i + off,
                    None => return err(base + i, "unclosed '{'"),
                };
                let mut step = BTreeSet::new();
                for part in input[i + 1..close].split(',') {
                    let name = part.trim();
                    if name.is_empty() {
                        continue;
                    }
                    if !is_ident(name) {
                        return err(base + i, format!("bad proposition name '{name}'"));
                    }
                    step.insert(name.to_string());
                }
                steps.push(step);
                i = close + 1;
            }
            c => return err(base + i, format!("unexpected character '{c}' in word")),
        }
    }
    Ok(steps)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
