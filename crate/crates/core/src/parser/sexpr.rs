//! S-expression reader with line/column tracking.

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sexpr {
    Atom(String, Pos),
    List(Vec<Sexpr>, Pos),
}

impl Sexpr {
    pub fn pos(&self) -> Pos {
        match self {
            Sexpr::Atom(_, p) | Sexpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(s, _) => Some(s),
            Sexpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(v, _) => Some(v),
            Sexpr::Atom(..) => None,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexpr, ParseError> {
        self.skip_trivia();
        let start = self.pos();
        match self.chars.peek() {
            None => Err(ParseError::at(start, "unexpected end of input")),
            Some(')') => Err(ParseError::at(start, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(ParseError::at(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexpr::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut tok = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    if !(c.is_alphanumeric() || "-_?:=.".contains(c)) {
                        return Err(ParseError::at(self.pos(), format!("unexpected character `{c}`")));
                    }
                    tok.extend(c.to_lowercase());
                    self.bump();
                }
                Ok(Sexpr::Atom(tok, start))
            }
        }
    }
}

/// Reads exactly one top-level expression.
pub fn read_one(text: &str) -> Result<Sexpr, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    r.skip_trivia();
    if r.chars.peek().is_none() {
        return Err(ParseError::at(r.pos(), "empty input"));
    }
    let e = r.read()?;
    r.skip_trivia();
    if r.chars.peek().is_some() {
        return Err(ParseError::at(r.pos(), "trailing input after top-level expression"));
    }
    Ok(e)
}
