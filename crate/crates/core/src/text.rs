//! Line-oriented tokenizer shared by the surface, curve, word and trace formats.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub column: usize,
    pub text: &'a str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    pub fn error(&self, index: usize, message: impl Into<String>) -> ParseError {
        let column = self
            .tokens
            .get(index)
            .map(|t| t.column)
            .unwrap_or_else(|| self.tokens.last().map_or(1, |t| t.column + t.text.len()));
        ParseError::new(self.number, column, message)
    }

    pub fn expect_len(&self, n: usize) -> Result<(), ParseError> {
        if self.tokens.len() != n {
            return Err(self.error(
                self.tokens.len().min(n),
                format!("`{}` expects {} fields, found {}", self.keyword(), n - 1, self.tokens.len() - 1),
            ));
        }
        Ok(())
    }

    pub fn usize_at(&self, index: usize) -> Result<usize, ParseError> {
        let tok = self
            .tokens
            .get(index)
            .ok_or_else(|| self.error(index, "missing integer"))?;
        tok.text
            .parse::<usize>()
            .map_err(|_| self.error(index, format!("expected nonnegative integer, found `{}`", tok.text)))
    }
}

/// Splits `text` into non-empty lines with `#` comments removed.
pub(crate) fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token { column: s + 1, text: &content[s..pos] });
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
        if let Some(s) = start {
            tokens.push(Token { column: s + 1, text: &content[s..] });
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

/// Parses a signed integer that may carry an explicit `+`.
pub(crate) fn parse_signed(text: &str) -> Option<i64> {
    let body = text.strip_prefix('+').unwrap_or(text);
    if body.starts_with('+') || body.is_empty() {
        return None;
    }
    body.parse().ok()
}

pub(crate) fn end_of_input(lines: &[Line<'_>], what: &str) -> ParseError {
    let line = lines.last().map_or(1, |l| l.number);
    ParseError::new(line, 1, format!("unexpected end of input: missing {what}"))
}
