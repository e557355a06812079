//! Surface syntax for task formulas.
//!
//! ```text
//! formula  := or ('->' formula)?        right-associative, sugar for !a | b
//! or       := and ('|' and)*
//! and      := temporal ('&' temporal)*
//! temporal := unary (('U' | 'R') temporal)?
//! unary    := ('!' | 'X' | 'F' | 'G') unary | atom
//! atom     := 'true' | 'false' | ident | '(' formula ')'
//! ```
//!
//! Identifiers match `[a-z_][a-z0-9_]*`; `X F G U R` are the temporal
//! operators and must be uppercase.

use super::{Formula, LabelSet, Proposition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: unexpected {}, expected one of: {}",
            self.line,
            self.col,
            self.found,
            self.expected.join(", ")
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Next,
    Finally,
    Globally,
    Until,
    Release,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Not => "'!'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Next => "'X'".into(),
            Tok::Finally => "'F'".into(),
            Tok::Globally => "'G'".into(),
            Tok::Until => "'U'".into(),
            Tok::Release => "'R'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn next_token(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        loop {
            let rest = &self.src[self.pos..];
            let Some(c) = rest.chars().next() else {
                return Ok((Tok::Eof, self.line, self.col));
            };
            if c.is_whitespace() {
                self.bump(c);
                continue;
            }
            if c == '#' {
                for c in rest.chars() {
                    if c == '\n' {
                        break;
                    }
                    self.bump(c);
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match c {
                '!' => {
                    self.bump(c);
                    Tok::Not
                }
                '&' => {
                    self.bump(c);
                    Tok::And
                }
                '|' => {
                    self.bump(c);
                    Tok::Or
                }
                '(' => {
                    self.bump(c);
                    Tok::LParen
                }
                ')' => {
                    self.bump(c);
                    Tok::RParen
                }
                '-' => {
                    self.bump(c);
                    if self.src[self.pos..].starts_with('>') {
                        self.bump('>');
                        Tok::Implies
                    } else {
                        return Err(ParseError {
                            line,
                            col,
                            found: "'-'".into(),
                            expected: vec!["'->'"],
                        });
                    }
                }
                'X' => {
                    self.bump(c);
                    Tok::Next
                }
                'F' => {
                    self.bump(c);
                    Tok::Finally
                }
                'G' => {
                    self.bump(c);
                    Tok::Globally
                }
                'U' => {
                    self.bump(c);
                    Tok::Until
                }
                'R' => {
                    self.bump(c);
                    Tok::Release
                }
                c if c.is_ascii_lowercase() || c == '_' => {
                    let ident: String = rest
                        .chars()
                        .take_while(|c| {
                            c.is_ascii_lowercase() || c.is_ascii_digit() || *c == '_'
                        })
                        .collect();
                    for c in ident.chars() {
                        self.bump(c);
                    }
                    match ident.as_str() {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(ident),
                    }
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        found: format!("{other:?}"),
                        expected: vec!["a formula token"],
                    })
                }
            };
            return Ok((tok, line, col));
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    at: usize,
}

const ATOM_STARTS: &[&str] = &["'true'", "'false'", "identifier", "'('", "'!'", "'X'", "'F'", "'G'"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (tok, line, col) = &self.tokens[self.at];
        ParseError {
            line: *line,
            col: *col,
            found: tok.describe(),
            expected,
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_expr()?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.and_expr()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.advance();
                let rhs = self.temporal()?;
                Ok(Formula::until(lhs, rhs))
            }
            Tok::Release => {
                self.advance();
                let rhs = self.temporal()?;
                Ok(Formula::release(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Next => {
                self.advance();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Finally => {
                self.advance();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Globally => {
                self.advance();
                Ok(Formula::always(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.advance();
                Ok(Formula::True)
            }
            Tok::False => {
                self.advance();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                self.advance();
                // The lexer only produces idents matching the name grammar.
                Ok(Formula::Prop(Proposition::new(&name).expect("lexed ident")))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.formula()?;
                if *self.peek() == Tok::RParen {
                    self.advance();
                    Ok(inner)
                } else {
                    Err(self.error(vec!["')'"]))
                }
            }
            _ => Err(self.error(ATOM_STARTS.to_vec())),
        }
    }
}

/// Parses a single formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let done = t.0 == Tok::Eof;
        tokens.push(t);
        if done {
            break;
        }
    }
    let mut parser = Parser { tokens, at: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(vec!["end of input", "'&'", "'|'", "'->'", "'U'", "'R'"]));
    }
    Ok(f)
}

/// Parses a label set written as comma- or whitespace-separated proposition
/// names, optionally wrapped in braces. `{}` and the empty string are the
/// empty set.
pub fn parse_label_set(text: &str) -> Result<LabelSet, super::LtlError> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(inner);
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(Proposition::new)
        .collect()
}

/// One named task from a task file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskDef {
    pub name: String,
    pub formula: Formula,
}

/// Parses a task file: one `task <name>: <formula>` per line, `#` comments
/// and blank lines allowed. Task names must be unique.
pub fn parse_task_file(text: &str) -> Result<Vec<TaskDef>, ParseError> {
    let mut tasks: Vec<TaskDef> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |col: usize, found: &str, expected: Vec<&'static str>| ParseError {
            line: line_no,
            col,
            found: found.to_string(),
            expected,
        };
        let Some(rest) = line.strip_prefix("task") else {
            return Err(err(1, &format!("{:?}", first_word(line)), vec!["'task'"]));
        };
        let rest = rest.trim_start();
        let Some((name, formula_text)) = rest.split_once(':') else {
            return Err(err(line.len(), "end of line", vec!["':'"]));
        };
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(err(5, &format!("{name:?}"), vec!["task name"]));
        }
        if tasks.iter().any(|t| t.name == name) {
            return Err(err(5, "duplicate task name", vec!["a unique task name"]));
        }
        let prefix_len = raw.len() - formula_text.len();
        let formula = parse(formula_text).map_err(|mut e| {
            e.col += prefix_len;
            e.line = line_no;
            e
        })?;
        tasks.push(TaskDef {
            name: name.to_string(),
            formula,
        });
    }
    Ok(tasks)
}

fn first_word(s: &str) -> &str {
    s.split_whitespace().next().unwrap_or("")
}

#[cfg(test)]
mod tests {
    use super::super::Formula;
    use super::*;

    #[test]
    fn single_operator_formula() {
        let f = parse("F got_wood").unwrap();
        assert_eq!(f, Formula::eventually(Formula::atom("got_wood")));
    }

    #[test]
    fn two_branch_crafting_formula() {
        let f = parse("F (got_wood & F used_workbench) & F (got_iron & F used_factory)").unwrap();
        let expected = Formula::and(
            Formula::eventually(Formula::and(
                Formula::atom("got_wood"),
                Formula::eventually(Formula::atom("used_workbench")),
            )),
            Formula::eventually(Formula::and(
                Formula::atom("got_iron"),
                Formula::eventually(Formula::atom("used_factory")),
            )),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn dangling_until_is_an_error() {
        let err = parse("got_wood U").unwrap_err();
        assert!(err.found.contains("end of input"), "found: {}", err.found);
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 11);
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn error_carries_line_and_column() {
        let err = parse("got_wood &\n& q").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
    }

    #[test]
    fn implication_is_right_associative_and_desugars() {
        let f = parse("a -> b -> c").unwrap();
        let expected = Formula::implies(
            Formula::atom("a"),
            Formula::implies(Formula::atom("b"), Formula::atom("c")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_not_tighter_than_until_tighter_than_and() {
        let f = parse("!a U b & c").unwrap();
        let expected = Formula::and(
            Formula::until(Formula::not(Formula::atom("a")), Formula::atom("b")),
            Formula::atom("c"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn label_set_forms() {
        assert!(parse_label_set("{}").unwrap().is_empty());
        assert!(parse_label_set("").unwrap().is_empty());
        let l = parse_label_set("got_wood, is_night").unwrap();
        assert_eq!(l.len(), 2);
        let l2 = parse_label_set("{got_wood is_night}").unwrap();
        assert_eq!(l, l2);
        assert!(parse_label_set("Bad").is_err());
    }

    #[test]
    fn task_file_stanzas() {
        let text = "# two tasks\n\ntask plank: F (got_wood & F used_toolshed)\ntask rope: F got_grass\n";
        let tasks = parse_task_file(text).unwrap();
        assert_eq!(tasks.len(), 2);
        assert_eq!(tasks[0].name, "plank");
        assert_eq!(tasks[1].formula, Formula::eventually(Formula::atom("got_grass")));
    }

    #[test]
    fn task_file_reports_file_line_numbers() {
        let text = "task ok: F p\ntask bad: p U\n";
        let err = parse_task_file(text).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn task_file_rejects_duplicates() {
        let text = "task a: p\ntask a: q\n";
        assert!(parse_task_file(text).is_err());
    }
}
