use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Xor,
    Nand,
    Nor,
}

impl BinaryOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Self::And => a && b,
            Self::Or => a || b,
            Self::Xor => a != b,
            Self::Nand => !(a && b),
            Self::Nor => !(a || b),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Self::And => "&",
            Self::Or => "|",
            Self::Xor => "^",
            Self::Nand => "NAND",
            Self::Nor => "NOR",
        }
    }
}

/// Propositional expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Var(String),
    Not(Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
}

impl Expression {
    pub fn var(name: impl Into<String>) -> Self {
        Self::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Expression) -> Self {
        Self::Not(Box::new(inner))
    }

    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        Self::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Expression, rhs: Expression) -> Self {
        Self::binary(BinaryOp::And, lhs, rhs)
    }

    pub fn or(lhs: Expression, rhs: Expression) -> Self {
        Self::binary(BinaryOp::Or, lhs, rhs)
    }

    /// Distinct variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expression, out: &mut Vec<String>) {
            match e {
                Expression::Var(name) => {
                    if !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Expression::Not(inner) => walk(inner, out),
                Expression::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Self::Var(_) => 0,
            Self::Not(inner) => 1 + inner.depth(),
            Self::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

/// Fully parenthesised rendering that parses back to the same tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Var(name) => f.write_str(name),
            Self::Not(inner) => write!(f, "!{inner}"),
            Self::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("unbalanced parenthesis at offset {0}")]
    UnbalancedParenthesis(usize),
    #[error("unexpected token `{found}` at offset {offset}")]
    UnexpectedToken { offset: usize, found: String },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Op(BinaryOp),
    Bang,
    Open,
    Close,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ident(name) => f.write_str(name),
            Self::Op(op) => f.write_str(op.symbol()),
            Self::Bang => f.write_str("!"),
            Self::Open => f.write_str("("),
            Self::Close => f.write_str(")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        let token = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '!' => Token::Bang,
            '&' => Token::Op(BinaryOp::And),
            '|' => Token::Op(BinaryOp::Or),
            '^' => Token::Op(BinaryOp::Xor),
            '(' => Token::Open,
            ')' => Token::Close,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = offset;
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = i + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &text[offset..end];
                let token = match word {
                    "NAND" => Token::Op(BinaryOp::Nand),
                    "NOR" => Token::Op(BinaryOp::Nor),
                    _ => Token::Ident(word.to_owned()),
                };
                tokens.push((offset, token));
                continue;
            }
            other => {
                return Err(ParseError::UnexpectedToken {
                    offset,
                    found: other.to_string(),
                })
            }
        };
        chars.next();
        tokens.push((offset, token));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let token = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        token
    }

    fn binary_level(
        &mut self,
        ops: &[BinaryOp],
        operand: fn(&mut Self) -> Result<Expression, ParseError>,
    ) -> Result<Expression, ParseError> {
        let mut lhs = operand(self)?;
        while let Some(Token::Op(op)) = self.peek() {
            let op = *op;
            if !ops.contains(&op) {
                break;
            }
            self.pos += 1;
            let rhs = operand(self)?;
            lhs = Expression::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn or_level(&mut self) -> Result<Expression, ParseError> {
        self.binary_level(&[BinaryOp::Or], Self::xor_level)
    }

    fn xor_level(&mut self) -> Result<Expression, ParseError> {
        self.binary_level(&[BinaryOp::Xor], Self::and_level)
    }

    fn and_level(&mut self) -> Result<Expression, ParseError> {
        self.binary_level(&[BinaryOp::And, BinaryOp::Nand, BinaryOp::Nor], Self::unary)
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        match self.next() {
            Some((_, Token::Bang)) => Ok(Expression::not(self.unary()?)),
            Some((_, Token::Ident(name))) => Ok(Expression::Var(name)),
            Some((open, Token::Open)) => {
                let inner = self.or_level()?;
                match self.next() {
                    Some((_, Token::Close)) => Ok(inner),
                    None => Err(ParseError::UnbalancedParenthesis(open)),
                    Some((offset, found)) => Err(ParseError::UnexpectedToken {
                        offset,
                        found: found.to_string(),
                    }),
                }
            }
            Some((offset, Token::Close)) => Err(ParseError::UnbalancedParenthesis(offset)),
            Some((offset, found)) => Err(ParseError::UnexpectedToken {
                offset,
                found: found.to_string(),
            }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Parses `!` > `&`/`NAND`/`NOR` > `^` > `|`, all binary operators left
/// associative.
pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.or_level()?;
    match parser.next() {
        None => Ok(expr),
        Some((offset, Token::Close)) => Err(ParseError::UnbalancedParenthesis(offset)),
        Some((offset, found)) => Err(ParseError::UnexpectedToken {
            offset,
            found: found.to_string(),
        }),
    }
}
