use super::SourceSpan;
use crate::score::DiagnosticCode;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// A run of characters other than whitespace, braces, quotes, and `#`.
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub struct LexError {
    pub code: DiagnosticCode,
    pub message: String,
    pub span: SourceSpan,
}

/// Line/column bookkeeping for byte offsets into one text.
pub struct Positions<'a> {
    text: &'a str,
    line_starts: Vec<usize>,
}

impl<'a> Positions<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Positions { text, line_starts }
    }

    /// Span of `len` bytes at `offset`, clamped into the text. Length is at
    /// least 1; on empty text the span is `(0, 1)`.
    pub fn span(&self, offset: usize, len: usize) -> SourceSpan {
        let total = self.text.len();
        let (offset, len) = if total == 0 {
            (0, 1)
        } else {
            let o = offset.min(total - 1);
            let o = floor_char_boundary(self.text, o);
            (o, len.clamp(1, total - o))
        };
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let start = self.line_starts[line - 1];
        let column = self.text[start..offset].chars().count() + 1;
        SourceSpan { line, column, offset, length: len }
    }

    /// Smallest span covering both.
    pub fn join(&self, a: SourceSpan, b: SourceSpan) -> SourceSpan {
        let end = (b.offset + b.length).max(a.offset + a.length);
        self.span(a.offset, end - a.offset)
    }
}

fn floor_char_boundary(s: &str, mut i: usize) -> usize {
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | '"' | '#')
}

pub fn lex(text: &str, pos: &Positions<'_>) -> (Vec<Token>, Vec<LexError>) {
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        match ch {
            '\n' => {
                chars.next();
                tokens.push(Token { tok: Tok::Newline, span: pos.span(i, 1) });
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    chars.next();
                }
            }
            '{' | '}' => {
                chars.next();
                let tok = if ch == '{' { Tok::LBrace } else { Tok::RBrace };
                tokens.push(Token { tok, span: pos.span(i, 1) });
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut end = None;
                while let Some(&(j, c)) = chars.peek() {
                    match c {
                        '"' => {
                            chars.next();
                            end = Some(j + 1);
                            break;
                        }
                        '\n' => break,
                        '\\' => {
                            chars.next();
                            match chars.next() {
                                Some((_, 'n')) => s.push('\n'),
                                Some((_, 't')) => s.push('\t'),
                                Some((_, '"')) => s.push('"'),
                                Some((_, '\\')) => s.push('\\'),
                                Some((k, other)) => {
                                    errors.push(LexError {
                                        code: DiagnosticCode::UnexpectedToken,
                                        message: format!("unknown escape `\\{other}`"),
                                        span: pos.span(j, k + other.len_utf8() - j),
                                    });
                                }
                                None => break,
                            }
                        }
                        c => {
                            chars.next();
                            s.push(c);
                        }
                    }
                }
                match end {
                    Some(e) => tokens.push(Token { tok: Tok::Str(s), span: pos.span(i, e - i) }),
                    None => {
                        let stop = chars.peek().map_or(text.len(), |&(j, _)| j);
                        errors.push(LexError {
                            code: DiagnosticCode::UnterminatedString,
                            message: "string is not closed on this line".into(),
                            span: pos.span(i, stop - i),
                        });
                        // keep the structure intact for recovery
                        tokens.push(Token { tok: Tok::Str(s), span: pos.span(i, stop - i) });
                    }
                }
            }
            _ => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    end = j + c.len_utf8();
                    chars.next();
                }
                tokens.push(Token { tok: Tok::Word(text[i..end].to_string()), span: pos.span(i, end - i) });
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, span: pos.span(text.len(), 1) });
    (tokens, errors)
}
