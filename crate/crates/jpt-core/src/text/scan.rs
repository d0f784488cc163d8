//! Single-row tokenizer shared by the patch text and N-Quads parsers.

use alloc::string::{String, ToString};

use crate::term::{Term, MAX_NESTING_DEPTH};
use crate::text::{ParseError, ParseErrorKind};

/// Cursor over one input line. Rows never span lines, so the scanner sees no
/// line breaks; the line number is carried only for error reports.
pub(crate) struct Scanner<'a> {
    line: &'a str,
    pub(crate) pos: usize,
    line_no: u32,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(line: &'a str, line_no: u32) -> Self {
        Scanner { line, pos: 0, line_no }
    }

    pub(crate) fn err_at(&self, at: usize, kind: ParseErrorKind) -> ParseError {
        let column = self.line[..at.min(self.line.len())].chars().count() as u32 + 1;
        ParseError { line: self.line_no, column, kind }
    }

    pub(crate) fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        self.err_at(self.pos, kind)
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.pos += 1;
        }
    }

    /// True at end of line or at a comment start between tokens. `#` inside
    /// IRIs and string literals never reaches this check because the term
    /// scanners consume those characters themselves.
    pub(crate) fn at_logical_end(&self) -> bool {
        matches!(self.peek(), None | Some('#'))
    }

    /// Consumes a run of non-whitespace characters (stopping before `#`).
    pub(crate) fn scan_bare_token(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '#' {
                break;
            }
            self.bump();
        }
        &self.line[start..self.pos]
    }

    pub(crate) fn expect_dot(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some('.') {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_here(ParseErrorKind::MissingDot))
        }
    }

    pub(crate) fn expect_row_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.at_logical_end() {
            Ok(())
        } else {
            Err(self.err_here(ParseErrorKind::TrailingContent))
        }
    }

    fn read_hex_escape(&mut self, digits: u32, start: usize) -> Result<char, ParseError> {
        let mut value: u32 = 0;
        for _ in 0..digits {
            let c = self
                .peek()
                .filter(char::is_ascii_hexdigit)
                .ok_or_else(|| self.err_at(start, ParseErrorKind::BadUnicodeEscape))?;
            value = value * 16 + c.to_digit(16).unwrap();
            self.bump();
        }
        char::from_u32(value).ok_or_else(|| self.err_at(start, ParseErrorKind::BadUnicodeEscape))
    }

    /// Scans `<iri>`; the caller has checked that the next character is `<`.
    fn scan_iri(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut iri = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err_at(start, ParseErrorKind::UnterminatedIri)),
                Some('>') => {
                    self.pos += 1;
                    return Ok(iri);
                }
                Some('\\') => {
                    let esc_start = self.pos;
                    self.bump();
                    let digits = match self.peek() {
                        Some('u') => 4,
                        Some('U') => 8,
                        _ => return Err(self.err_at(esc_start, ParseErrorKind::BadEscape)),
                    };
                    self.bump();
                    iri.push(self.read_hex_escape(digits, esc_start)?);
                }
                Some(c) if c <= '\u{20}' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.err_here(ParseErrorKind::ForbiddenIriChar(c)));
                }
                Some(_) => {
                    let c = self.bump().unwrap();
                    iri.push(c);
                }
            }
        }
    }

    /// Scans the quoted body of a string literal; the caller has checked that
    /// the next character is `"`.
    fn scan_string_body(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err_at(start, ParseErrorKind::UnterminatedString)),
                Some('"') => {
                    self.pos += 1;
                    return Ok(s);
                }
                Some('\\') => {
                    let esc_start = self.pos;
                    self.bump();
                    match self.peek() {
                        Some('t') => {
                            s.push('\t');
                            self.bump();
                        }
                        Some('b') => {
                            s.push('\u{8}');
                            self.bump();
                        }
                        Some('n') => {
                            s.push('\n');
                            self.bump();
                        }
                        Some('r') => {
                            s.push('\r');
                            self.bump();
                        }
                        Some('f') => {
                            s.push('\u{C}');
                            self.bump();
                        }
                        Some('"') => {
                            s.push('"');
                            self.bump();
                        }
                        Some('\'') => {
                            s.push('\'');
                            self.bump();
                        }
                        Some('\\') => {
                            s.push('\\');
                            self.bump();
                        }
                        Some('u') => {
                            self.bump();
                            s.push(self.read_hex_escape(4, esc_start)?);
                        }
                        Some('U') => {
                            self.bump();
                            s.push(self.read_hex_escape(8, esc_start)?);
                        }
                        _ => return Err(self.err_at(esc_start, ParseErrorKind::BadEscape)),
                    }
                }
                Some(_) => {
                    let c = self.bump().unwrap();
                    s.push(c);
                }
            }
        }
    }

    fn scan_langtag(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.pos += 1; // '@'
        let mut tag = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            tag.push(self.bump().unwrap());
        }
        if tag.is_empty() {
            return Err(self.err_at(start, ParseErrorKind::InvalidLangTag));
        }
        while self.peek() == Some('-') {
            self.bump();
            tag.push('-');
            let before = tag.len();
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                tag.push(self.bump().unwrap());
            }
            if tag.len() == before {
                return Err(self.err_at(start, ParseErrorKind::InvalidLangTag));
            }
        }
        Ok(tag)
    }

    fn scan_bnode(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.pos += 1; // '_'
        if self.peek() != Some(':') {
            return Err(self.err_at(start, ParseErrorKind::BadBlankNodeLabel));
        }
        self.pos += 1;
        let mut label = String::new();
        loop {
            match self.peek() {
                Some(c) if is_label_char(c) => {
                    label.push(self.bump().unwrap());
                }
                // A dot stays in the label only when another label character
                // follows; a trailing dot is the row terminator.
                Some('.') => {
                    let follows = self.line[self.pos + 1..].chars().next();
                    if follows.is_some_and(is_label_char) {
                        label.push('.');
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }
        if label.is_empty() {
            return Err(self.err_at(start, ParseErrorKind::BadBlankNodeLabel));
        }
        Ok(label)
    }

    /// Scans one term. Leading whitespace is skipped.
    pub(crate) fn scan_term(&mut self, depth: usize) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('<') if self.rest().starts_with("<<") => {
                if depth >= MAX_NESTING_DEPTH {
                    return Err(self.err_at(start, ParseErrorKind::NestingTooDeep));
                }
                self.pos += 2;
                let subject = self.scan_term(depth + 1)?;
                let predicate = self.scan_term(depth + 1)?;
                let object = self.scan_term(depth + 1)?;
                self.skip_ws();
                if !self.rest().starts_with(">>") {
                    return Err(self.err_at(start, ParseErrorKind::UnterminatedQuotedTriple));
                }
                self.pos += 2;
                Ok(Term::quoted(subject, predicate, object))
            }
            Some('<') => Ok(Term::Iri(self.scan_iri()?)),
            Some('"') => {
                let lexical = self.scan_string_body()?;
                match self.peek() {
                    Some('@') => {
                        let lang = self.scan_langtag()?;
                        Ok(Term::LiteralLang { lexical, lang })
                    }
                    Some('^') => {
                        if !self.rest().starts_with("^^") {
                            return Err(self.err_here(ParseErrorKind::ExpectedDatatype));
                        }
                        self.pos += 2;
                        self.skip_ws();
                        if self.peek() != Some('<') || self.rest().starts_with("<<") {
                            return Err(self.err_here(ParseErrorKind::ExpectedDatatype));
                        }
                        let datatype = self.scan_iri()?;
                        Ok(Term::LiteralDt { lexical, datatype })
                    }
                    _ => Ok(Term::LiteralSimple(lexical)),
                }
            }
            Some('_') => Ok(Term::BlankNode(self.scan_bnode()?)),
            _ => Err(self.err_at(start, ParseErrorKind::ExpectedTerm)),
        }
    }

    /// Scans a term and requires it to be a plain string literal.
    pub(crate) fn scan_plain_string(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() != Some('"') {
            return Err(self.err_at(start, ParseErrorKind::ExpectedString));
        }
        match self.scan_term(0)? {
            Term::LiteralSimple(s) => Ok(s),
            _ => Err(self.err_at(start, ParseErrorKind::ExpectedString)),
        }
    }

    /// Scans a term and requires it to be an IRI.
    pub(crate) fn scan_iri_term(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() != Some('<') || self.rest().starts_with("<<") {
            return Err(self.err_at(start, ParseErrorKind::ExpectedIri));
        }
        self.scan_iri()
    }

    /// Scans the key of a header row: a bare non-empty token.
    pub(crate) fn scan_header_key(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let key = self.scan_bare_token();
        if key.is_empty() || key == "." {
            return Err(self.err_at(start, ParseErrorKind::ExpectedKey));
        }
        Ok(key.to_string())
    }
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || (c as u32) >= 0x80
}
