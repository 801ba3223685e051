//! Recursive-descent parser for vector-field expressions.
//!
//! Grammar:
//!
//! ```text
//! field    := keyword | '[' expr ',' expr ',' expr ',' expr ']'
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := primary ('^' uint)*
//! primary  := rational | var | '(' expr ')'
//! var      := 'x0' | 'x1' | 'x2' | 'x3'
//! rational := uint ('/' uint)?
//! keyword  := 'P0'..'P3' | 'J01'..'J23' | 'D' | 'C0'..'C3'
//! ```
//!
//! Keywords expand to the standard conformal generators. Parsing a rendered
//! field reproduces the identical canonical polynomial components.

use std::fmt;

use thiserror::Error;

use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::vecfield::{standard_generator, GeneratorKind, VectorField};

/// Exponents above this are rejected to keep exact arithmetic bounded.
const MAX_EXPONENT: u32 = 64;

/// Syntax error with 1-based source position.
#[derive(Debug, Error, PartialEq)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Non-fatal findings about an accepted field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// Total degree exceeds 2, so the field cannot be conformal; it is still
    /// usable with the general operations.
    DegreeAboveConformal { degree: u32 },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::DegreeAboveConformal { degree } => write!(
                f,
                "field has total degree {degree} > 2 and cannot be conformal"
            ),
        }
    }
}

/// A parsed field together with any warnings.
#[derive(Debug, Clone)]
pub struct ParsedField {
    pub field: VectorField,
    pub warnings: Vec<ParseWarning>,
}

/// Parses a field expression into exact polynomial components.
pub fn parse_vector_field(text: &str) -> Result<ParsedField, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, index: 0 };
    let field = parser.field()?;
    parser.expect_end()?;
    let mut warnings = Vec::new();
    if let Some(degree) = field.total_degree() {
        if degree > 2 {
            warnings.push(ParseWarning::DegreeAboveConformal { degree });
        }
    }
    Ok(ParsedField { field, warnings })
}

/// Renders a field in the expression grammar; the inverse of parsing up to
/// keyword expansion.
pub fn render_vector_field(field: &VectorField) -> String {
    format!(
        "[{}, {}, {}, {}]",
        field.component(0),
        field.component(1),
        field.component(2),
        field.component(3)
    )
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Rational(Scalar),
    Uint(u32),
    Var(usize),
    Keyword(GeneratorKind),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();

    while let Some(&c) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let err = |message: String| ParseError {
            line: tok_line,
            column: tok_column,
            message,
        };

        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }

        let simple = match c {
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '^' => Some(TokenKind::Caret),
            _ => None,
        };
        if let Some(kind) = simple {
            bump(&mut chars);
            tokens.push(Token {
                kind,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }

        if c.is_ascii_digit() {
            let mut digits = String::new();
            while matches!(chars.peek(), Some(d) if d.is_ascii_digit()) {
                digits.push(bump(&mut chars));
            }
            // a '/' directly after digits continues the rational literal
            let kind = if matches!(chars.peek(), Some('/')) {
                bump(&mut chars);
                let mut denom = String::new();
                while matches!(chars.peek(), Some(d) if d.is_ascii_digit()) {
                    denom.push(bump(&mut chars));
                }
                if denom.is_empty() {
                    return Err(err("expected digits after '/'".into()));
                }
                let literal = format!("{digits}/{denom}");
                let value: Scalar = literal
                    .parse()
                    .map_err(|e| err(format!("bad rational literal: {e}")))?;
                TokenKind::Rational(value)
            } else {
                // plain integers double as exponents after '^'
                match digits.parse::<u32>() {
                    Ok(small) => TokenKind::Uint(small),
                    Err(_) => TokenKind::Rational(
                        digits
                            .parse()
                            .map_err(|e| err(format!("bad integer literal: {e}")))?,
                    ),
                }
            };
            tokens.push(Token {
                kind,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }

        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while matches!(chars.peek(), Some(a) if a.is_ascii_alphanumeric()) {
                word.push(bump(&mut chars));
            }
            let kind = match word.as_str() {
                "x0" => TokenKind::Var(0),
                "x1" => TokenKind::Var(1),
                "x2" => TokenKind::Var(2),
                "x3" => TokenKind::Var(3),
                other => match GeneratorKind::from_name(other) {
                    Some(kind) => TokenKind::Keyword(kind),
                    None => {
                        return Err(err(format!(
                            "unknown identifier {other:?}; expected x0..x3 or a generator keyword"
                        )))
                    }
                },
            };
            tokens.push(Token {
                kind,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }

        return Err(err(format!("unexpected character {c:?}")));
    }

    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    index: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index)
    }

    fn advance(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.index).cloned();
        if tok.is_some() {
            self.index += 1;
        }
        tok
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError {
                line: tok.line,
                column: tok.column,
                message: message.into(),
            },
            None => {
                let (line, column) = self
                    .tokens
                    .last()
                    .map(|t| (t.line, t.column + 1))
                    .unwrap_or((1, 1));
                ParseError {
                    line,
                    column,
                    message: format!("{} (input ended)", message.into()),
                }
            }
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.advance();
                Ok(())
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.index == self.tokens.len() {
            Ok(())
        } else {
            Err(self.error_here("unexpected trailing input"))
        }
    }

    fn field(&mut self) -> Result<VectorField, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Keyword(kind)) => {
                self.advance();
                Ok(standard_generator(kind))
            }
            Some(TokenKind::LBracket) => {
                self.advance();
                let c0 = self.expr()?;
                self.expect(TokenKind::Comma, "','")?;
                let c1 = self.expr()?;
                self.expect(TokenKind::Comma, "','")?;
                let c2 = self.expr()?;
                self.expect(TokenKind::Comma, "','")?;
                let c3 = self.expr()?;
                self.expect(TokenKind::RBracket, "']'")?;
                Ok(VectorField::new([c0, c1, c2, c3]))
            }
            _ => Err(self.error_here("expected '[' or a generator keyword")),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.advance();
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Plus) => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Some(TokenKind::Minus) => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Star)) {
            self.advance();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let mut base = self.primary()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            self.advance();
            let exponent = match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Uint(n)) => {
                    self.advance();
                    n
                }
                _ => return Err(self.error_here("expected a nonnegative integer exponent")),
            };
            if exponent > MAX_EXPONENT {
                return Err(self.error_here(format!("exponent exceeds the cap {MAX_EXPONENT}")));
            }
            base = base.pow(exponent);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Rational(value)) => {
                self.advance();
                Ok(Polynomial::constant(value))
            }
            Some(TokenKind::Uint(n)) => {
                self.advance();
                Ok(Polynomial::int(n as i64))
            }
            Some(TokenKind::Var(axis)) => {
                self.advance();
                Ok(Polynomial::var(axis))
            }
            Some(TokenKind::LParen) => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error_here("expected a rational, a coordinate, or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecfield::GeneratorKind::*;

    #[test]
    fn keyword_expands_to_the_standard_generator() {
        let parsed = parse_vector_field("D").unwrap();
        assert_eq!(parsed.field, standard_generator(D));
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn explicit_dilatation_matches_the_keyword() {
        let parsed = parse_vector_field("[x0, x1, x2, x3]").unwrap();
        assert_eq!(parsed.field, standard_generator(D));
    }

    #[test]
    fn explicit_acceleration_generator() {
        let text = "[x0^2 + x1^2 + x2^2 + x3^2, 2*x0*x1, 2*x0*x2, 2*x0*x3]";
        let parsed = parse_vector_field(text).unwrap();
        assert_eq!(parsed.field, standard_generator(C0));
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn rationals_parens_and_powers() {
        let parsed = parse_vector_field("[(x0 - 1/2)^2, 3/4*x1, -x2, 0]").unwrap();
        let expected = &(&Polynomial::var(0) - &Polynomial::constant(Scalar::ratio(1, 2))).pow(2);
        assert_eq!(parsed.field.component(0), expected);
        assert_eq!(
            parsed.field.component(1),
            &Polynomial::var(1).scale(&Scalar::ratio(3, 4))
        );
        assert_eq!(parsed.field.component(2), &-&Polynomial::var(2));
        assert!(parsed.field.component(3).is_zero());
    }

    #[test]
    fn render_then_parse_is_a_fixed_point() {
        for kind in GeneratorKind::ALL {
            let field = standard_generator(kind);
            let rendered = render_vector_field(&field);
            let reparsed = parse_vector_field(&rendered).unwrap();
            assert_eq!(reparsed.field, field, "kind {kind}, rendered {rendered}");
            // and rendering again is bytewise stable
            assert_eq!(render_vector_field(&reparsed.field), rendered);
        }
    }

    #[test]
    fn degree_warning_above_two() {
        let parsed = parse_vector_field("[x0^3, 0, 0, 0]").unwrap();
        assert_eq!(
            parsed.warnings,
            vec![ParseWarning::DegreeAboveConformal { degree: 3 }]
        );
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = parse_vector_field("[x0, x9, 0, 0]").unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));

        let err = parse_vector_field("[x0,\n x1 + , 0, 0]").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 7);

        let err = parse_vector_field("[x0, x1, x2").unwrap_err();
        assert!(err.message.contains("input ended"), "{}", err.message);

        let err = parse_vector_field("Q7").unwrap_err();
        assert!(err.message.contains("unknown identifier"));

        let err = parse_vector_field("[x0^x1, 0, 0, 0]").unwrap_err();
        assert!(err.message.contains("exponent"));

        // trailing garbage after a complete field
        let err = parse_vector_field("D D").unwrap_err();
        assert!(err.message.contains("trailing"));
    }

    #[test]
    fn exponent_cap() {
        let err = parse_vector_field("[x0^1000, 0, 0, 0]").unwrap_err();
        assert!(err.message.contains("cap"));
    }
}
