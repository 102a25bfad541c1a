//! Untyped syntax tree of the scene format.
//!
//! ```text
//! file   = item*
//! item   = key "=" value | key "{" item* "}"
//! value  = number | string | word | "[" [value ("," value)* [","]] "]"
//! ```
//! `#` starts a comment running to the end of the line.

use std::fmt;

use super::SceneError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// Keeps the source text so integers survive without rounding.
    Number(f64, String),
    Str(String),
    Word(String),
    Array(Vec<(Value, Span)>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Number(..) => "number",
            Value::Str(_) => "string",
            Value::Word(_) => "word",
            Value::Array(_) => "array",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Assign { key: String, value: Value, span: Span },
    Block { name: String, body: Vec<Item>, span: Span },
}

impl Item {
    pub fn key(&self) -> &str {
        match self {
            Item::Assign { key, .. } => key,
            Item::Block { name, .. } => name,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            Item::Assign { span, .. } | Item::Block { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64, String),
    Str(String),
    Eq,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(_, s) => write!(f, "number `{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Eq => f.write_str("`=`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, SceneError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, col, msg: String| SceneError::Syntax {
        span: Span { line, col },
        message: msg,
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, &mut col, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '=' | '{' | '}' | '[' | ']' | ',' => {
                let t = match c {
                    '=' => Tok::Eq,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    _ => Tok::Comma,
                };
                toks.push((t, span));
                advance(&mut i, &mut col, 1);
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => return Err(syntax(line, col, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => {
                            match chars.get(j + 1) {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                other => {
                                    return Err(syntax(line, col + j - i, format!("bad escape {other:?} in string")))
                                }
                            }
                            j += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                toks.push((Tok::Str(s), span));
                let n = j + 1 - i;
                advance(&mut i, &mut col, n);
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || "+-.".contains(chars[j])) {
                    // A sign is only part of the number at the start or after an exponent marker.
                    if (chars[j] == '+' || chars[j] == '-') && j > i && !matches!(chars[j - 1], 'e' | 'E') {
                        break;
                    }
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| syntax(line, col, format!("malformed number `{text}`")))?;
                if !v.is_finite() {
                    return Err(syntax(line, col, format!("number `{text}` is not finite")));
                }
                toks.push((Tok::Number(v, text), span));
                let n = j - i;
                advance(&mut i, &mut col, n);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                toks.push((Tok::Ident(chars[i..j].iter().collect()), span));
                let n = j - i;
                advance(&mut i, &mut col, n);
            }
            other => return Err(syntax(line, col, format!("unexpected character {other:?}"))),
        }
    }
    toks.push((Tok::Eof, Span { line, col }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Span) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> SceneError {
        let (tok, span) = self.peek();
        SceneError::Syntax {
            span: *span,
            message: format!("expected {expected}, found {tok}"),
        }
    }

    fn items(&mut self, nested: bool) -> Result<Vec<Item>, SceneError> {
        let mut items = Vec::new();
        loop {
            match self.peek().0.clone() {
                Tok::Eof if !nested => return Ok(items),
                Tok::RBrace if nested => {
                    self.next();
                    return Ok(items);
                }
                Tok::Ident(key) => {
                    let span = self.next().1;
                    match self.peek().0 {
                        Tok::Eq => {
                            self.next();
                            let value = self.value()?.0;
                            items.push(Item::Assign { key, value, span });
                        }
                        Tok::LBrace => {
                            self.next();
                            let body = self.items(true)?;
                            items.push(Item::Block { name: key, body, span });
                        }
                        _ => return Err(self.unexpected("`=` or `{`")),
                    }
                }
                _ if nested => return Err(self.unexpected("a key or `}`")),
                _ => return Err(self.unexpected("a key")),
            }
        }
    }

    fn value(&mut self) -> Result<(Value, Span), SceneError> {
        let (tok, span) = self.peek().clone();
        let v = match tok {
            Tok::Number(v, text) => {
                self.next();
                Value::Number(v, text)
            }
            Tok::Str(s) => {
                self.next();
                Value::Str(s)
            }
            Tok::Ident(w) => {
                self.next();
                Value::Word(w)
            }
            Tok::LBracket => {
                self.next();
                let mut elems = Vec::new();
                loop {
                    if self.peek().0 == Tok::RBracket {
                        self.next();
                        break;
                    }
                    elems.push(self.value()?);
                    match self.peek().0 {
                        Tok::Comma => {
                            self.next();
                        }
                        Tok::RBracket => {}
                        _ => return Err(self.unexpected("`,` or `]`")),
                    }
                }
                Value::Array(elems)
            }
            _ => return Err(self.unexpected("a value")),
        };
        Ok((v, span))
    }
}

pub fn parse_items(text: &str) -> Result<Vec<Item>, SceneError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    p.items(false)
}

/// Parses a single value, as given on the command line.
pub fn parse_value(text: &str) -> Result<Value, SceneError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let v = p.value()?.0;
    if p.peek().0 != Tok::Eof {
        return Err(p.unexpected("end of value"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_blocks_and_arrays() {
        let items = parse_items("a { b = [1, -2.5e1, x] c = \"s\" } # done\nd = 3").unwrap();
        assert_eq!(items.len(), 2);
        let Item::Block { body, .. } = &items[0] else { panic!() };
        let Item::Assign {
            value: Value::Array(a), ..
        } = &body[0]
        else {
            panic!()
        };
        assert_eq!(a[1].0, Value::Number(-25.0, "-2.5e1".into()));
        assert_eq!(items[1].span(), Span { line: 2, col: 1 });
    }

    #[test]
    fn errors_carry_positions() {
        let SceneError::Syntax { span, .. } = parse_items("orb {\n  radius_cm 6.8\n}").unwrap_err() else {
            panic!()
        };
        assert_eq!(span, Span { line: 2, col: 13 });
        assert!(parse_items("orb { radius_cm = 6.8").is_err());
        assert!(parse_items("a = \"open").is_err());
        assert!(parse_items("a = 1.2.3").is_err());
    }
}
