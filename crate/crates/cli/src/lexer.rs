//! Tokens and a cursor shared by the program, state and function parsers.

use std::fmt;

use thiserror::Error;

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(u64),
    Word(String),
    /// `->`
    Arrow,
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: &str = ".;[]{}(),?=/";

/// Splits `text` into tokens. `//` starts a comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                bump(&mut chars);
            }
            let n = digits
                .parse()
                .map_err(|_| ParseError::new(pos, format!("number {digits} is too large")))?;
            out.push(Token {
                tok: Tok::Num(n),
                pos,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&d) = chars
                .peek()
                .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
            {
                word.push(d);
                bump(&mut chars);
            }
            out.push(Token {
                tok: Tok::Word(word),
                pos,
            });
        } else if c == '-' {
            bump(&mut chars);
            if chars.peek() != Some(&'>') {
                return Err(ParseError::new(pos, "expected `->`"));
            }
            bump(&mut chars);
            out.push(Token {
                tok: Tok::Arrow,
                pos,
            });
        } else if c == '/' && {
            let mut ahead = chars.clone();
            ahead.next();
            ahead.peek() == Some(&'/')
        } {
            while chars.peek().is_some_and(|d| *d != '\n') {
                bump(&mut chars);
            }
        } else if SYMBOLS.contains(c) {
            bump(&mut chars);
            out.push(Token {
                tok: Tok::Sym(c),
                pos,
            });
        } else {
            return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column },
    });
    Ok(out)
}

/// Recursive-descent helper over a token list ending in [`Tok::Eof`].
pub(crate) struct Cursor {
    toks: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &str) -> ParseError {
        ParseError::new(
            self.pos(),
            format!("expected {expected}, found {}", self.peek()),
        )
    }

    pub(crate) fn is_sym(&self, c: char) -> bool {
        self.peek() == &Tok::Sym(c)
    }

    pub(crate) fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    pub(crate) fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.is_sym(c) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    pub(crate) fn arrow(&mut self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Arrow {
            self.advance();
            Ok(())
        } else {
            Err(self.error("`->`"))
        }
    }

    pub(crate) fn keyword(&mut self, w: &str) -> Result<(), ParseError> {
        if self.is_word(w) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&format!("`{w}`")))
        }
    }

    pub(crate) fn number(&mut self) -> Result<u64, ParseError> {
        match *self.peek() {
            Tok::Num(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    /// One of `options`, returning its index.
    pub(crate) fn one_of(&mut self, options: &[&str]) -> Result<usize, ParseError> {
        if let Tok::Word(w) = self.peek() {
            if let Some(i) = options.iter().position(|o| o == w) {
                self.advance();
                return Ok(i);
            }
        }
        let listed: Vec<String> = options.iter().map(|o| format!("`{o}`")).collect();
        Err(self.error(&listed.join(" or ")))
    }

    /// A procedure name `X<n>`.
    pub(crate) fn proc_name(&mut self) -> Result<u64, ParseError> {
        if let Tok::Word(w) = self.peek() {
            let digits = w
                .strip_prefix('X')
                .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
            if let Some(n) = digits.and_then(|d| d.parse::<u64>().ok()) {
                self.advance();
                return Ok(n);
            }
        }
        Err(self.error("a procedure name `X<n>`"))
    }

    /// A comma-separated list of `item`s, possibly empty, up to `close`.
    pub(crate) fn list<T>(
        &mut self,
        close: char,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.is_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.is_sym(',') {
                return Ok(out);
            }
            self.advance();
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }
}
