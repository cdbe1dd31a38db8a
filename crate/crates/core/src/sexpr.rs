//! Minimal S-expression reader shared by the SUO-KIF readers.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexpr {
    Atom(String),
    Str(String),
    List(Vec<Sexpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SexprError {
    #[error("unbalanced ')' at {0}")]
    UnexpectedClose(Pos),
    #[error("unclosed '(' opened at {0}")]
    Unclosed(Pos),
    #[error("unterminated string starting at {0}")]
    UnterminatedString(Pos),
}

impl SexprError {
    pub fn pos(&self) -> Pos {
        match self {
            SexprError::UnexpectedClose(p)
            | SexprError::Unclosed(p)
            | SexprError::UnterminatedString(p) => *p,
        }
    }
}

impl Sexpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(a) => Some(a),
            _ => None,
        }
    }
}

/// Reads every top-level expression, each tagged with its starting position.
/// `;` starts a line comment.
pub fn parse_all(text: &str) -> Result<Vec<(Pos, Sexpr)>, SexprError> {
    let mut out = Vec::new();
    let mut stack: Vec<(Pos, Vec<Sexpr>)> = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut line = 1;
    let mut line_start = 0;

    let push =
        |stack: &mut Vec<(Pos, Vec<Sexpr>)>, out: &mut Vec<(Pos, Sexpr)>, pos: Pos, e| match stack
            .last_mut()
        {
            Some((_, items)) => items.push(e),
            None => out.push((pos, e)),
        };

    while let Some(&(i, c)) = chars.peek() {
        let pos = Pos {
            line,
            col: i - line_start + 1,
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                line_start = i + 1;
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                stack.push((pos, Vec::new()));
            }
            ')' => {
                chars.next();
                let (open, items) = stack.pop().ok_or(SexprError::UnexpectedClose(pos))?;
                push(&mut stack, &mut out, open, Sexpr::List(items));
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some((j, c)) = chars.next() {
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => {
                            if let Some((_, e)) = chars.next() {
                                s.push(e);
                            }
                        }
                        '\n' => {
                            line += 1;
                            line_start = j + 1;
                            s.push(c);
                        }
                        _ => s.push(c),
                    }
                }
                if !closed {
                    return Err(SexprError::UnterminatedString(pos));
                }
                push(&mut stack, &mut out, pos, Sexpr::Str(s));
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                push(&mut stack, &mut out, pos, Sexpr::Atom(s));
            }
        }
    }
    if let Some((open, _)) = stack.pop() {
        return Err(SexprError::Unclosed(open));
    }
    Ok(out)
}
