//! Concrete syntax for plain, labeled and marked terms.
//!
//! ```text
//! term  := lam | app
//! lam   := '\' IDENT '.' term              plain
//!        | '\' IDENT '^' LABEL '.' term    labeled ('*' for the star label)
//! app   := atom (atom | '@' LABEL atom)*   left associative
//! atom  := IDENT | '(' term ')' | '(' '\*' IDENT '.' term ')' atom
//! ```
//! A trailing lambda is accepted as the last operand of an application.

use crate::error::ParseError;
use crate::labeled::{LTerm, Label};
use crate::marked::MTerm;
use crate::names::{Name, NameSet};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grammar {
    Plain,
    Labeled,
    Marked,
}

impl Grammar {
    /// Guesses the grammar from the characters used.
    pub fn detect(text: &str) -> Grammar {
        if text.contains('@') || text.contains('^') {
            Grammar::Labeled
        } else if text.contains("\\*") || text.contains("λ*") {
            Grammar::Marked
        } else {
            Grammar::Plain
        }
    }
}

/// Any of the three kinds of term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyTerm {
    Plain(Term),
    Labeled(LTerm),
    Marked(MTerm),
}

pub fn parse(text: &str, grammar: Grammar) -> Result<AnyTerm, ParseError> {
    Ok(match grammar {
        Grammar::Plain => AnyTerm::Plain(parse_term(text)?),
        Grammar::Labeled => AnyTerm::Labeled(parse_labeled(text)?),
        Grammar::Marked => AnyTerm::Marked(parse_marked(text)?),
    })
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let raw = Parser::new(text, Grammar::Plain)?.parse_all()?;
    Ok(to_plain(&raw).normalized(&NameSet::new()))
}

pub fn parse_labeled(text: &str) -> Result<LTerm, ParseError> {
    let raw = Parser::new(text, Grammar::Labeled)?.parse_all()?;
    Ok(to_labeled(&raw).normalized(&NameSet::new()))
}

pub fn parse_marked(text: &str) -> Result<MTerm, ParseError> {
    let raw = Parser::new(text, Grammar::Marked)?.parse_all()?;
    Ok(to_marked(&raw).normalized(&NameSet::new()))
}

#[derive(Debug)]
enum Raw {
    Var(Name),
    Lam(Name, Option<Label>, Box<Raw>),
    App(Option<Name>, Box<Raw>, Box<Raw>),
    Marked(Name, Box<Raw>, Box<Raw>),
}

fn to_plain(r: &Raw) -> Term {
    match r {
        Raw::Var(x) => Term::Var(x.clone()),
        Raw::Lam(x, _, b) => Term::Abs(x.clone(), Box::new(to_plain(b))),
        Raw::App(_, f, a) => Term::app(to_plain(f), to_plain(a)),
        Raw::Marked(..) => unreachable!("marked redex outside the marked grammar"),
    }
}

fn to_labeled(r: &Raw) -> LTerm {
    match r {
        Raw::Var(x) => LTerm::Var(x.clone()),
        Raw::Lam(x, l, b) => LTerm::Abs(
            l.clone().expect("labeled grammar requires labels"),
            x.clone(),
            Box::new(to_labeled(b)),
        ),
        Raw::App(l, f, a) => LTerm::App(
            l.clone().expect("labeled grammar requires labels"),
            Box::new(to_labeled(f)),
            Box::new(to_labeled(a)),
        ),
        Raw::Marked(..) => unreachable!("marked redex outside the marked grammar"),
    }
}

fn to_marked(r: &Raw) -> MTerm {
    match r {
        Raw::Var(x) => MTerm::Var(x.clone()),
        Raw::Lam(x, _, b) => MTerm::Abs(x.clone(), Box::new(to_marked(b))),
        Raw::App(_, f, a) => MTerm::App(Box::new(to_marked(f)), Box::new(to_marked(a))),
        Raw::Marked(x, b, a) => {
            MTerm::Marked(x.clone(), Box::new(to_marked(b)), Box::new(to_marked(a)))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Caret,
    At,
    Star,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lambda => "'\\'".into(),
            Tok::Dot => "'.'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Caret => "'^'".into(),
            Tok::At => "'@'".into(),
            Tok::Star => "'*'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Loc {
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Loc)>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, column };
        let tok = match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '\\' | 'λ' => Tok::Lambda,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '^' => Tok::Caret,
            '@' => Tok::At,
            '*' | '★' | '⋆' => Tok::Star,
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        s.push(d);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), loc));
                continue;
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        chars.next();
        column += 1;
        out.push((tok, loc));
    }
    out.push((Tok::Eof, Loc { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    pos: usize,
    grammar: Grammar,
}

impl Parser {
    fn new(text: &str, grammar: Grammar) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            grammar,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn loc(&self) -> Loc {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let loc = self.loc();
        Err(ParseError {
            line: loc.line,
            column: loc.column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn ident(&mut self, what: &str) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Name::new(&s))
            }
            _ => self.unexpected(what),
        }
    }

    fn parse_all(mut self) -> Result<Raw, ParseError> {
        let t = self.term()?;
        if *self.peek() != Tok::Eof {
            return self.unexpected("end of input");
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        if *self.peek() == Tok::Lambda {
            if *self.peek_at(1) == Tok::Star {
                return self.error("a marked abstraction must be parenthesized and applied");
            }
            self.lam()
        } else {
            self.app()
        }
    }

    fn lam(&mut self) -> Result<Raw, ParseError> {
        self.expect(Tok::Lambda)?;
        let x = self.ident("a variable after '\\'")?;
        let label = if *self.peek() == Tok::Caret {
            if self.grammar != Grammar::Labeled {
                return self.error("labels are only allowed in labeled terms");
            }
            self.bump();
            Some(self.label()?)
        } else if self.grammar == Grammar::Labeled {
            return self.unexpected("'^' and a label");
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        Ok(Raw::Lam(x, label, Box::new(body)))
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        if *self.peek() == Tok::Star {
            self.bump();
            return Ok(Label::Star);
        }
        Ok(Label::Name(self.ident("a label")?))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::Lambda)
    }

    fn app(&mut self) -> Result<Raw, ParseError> {
        let mut acc = self.atom()?;
        loop {
            let label = match self.peek() {
                Tok::At => {
                    if self.grammar != Grammar::Labeled {
                        return self.error("labeled applications are only allowed in labeled terms");
                    }
                    self.bump();
                    if *self.peek() == Tok::Star {
                        return self.error("an application cannot carry the star label");
                    }
                    Some(self.ident("an application label after '@'")?)
                }
                _ if self.starts_atom() => {
                    if self.grammar == Grammar::Labeled {
                        return self.error("applications in labeled terms must be written M @a N");
                    }
                    None
                }
                _ => break,
            };
            let last = *self.peek() == Tok::Lambda;
            let arg = if last { self.lam()? } else { self.atom()? };
            acc = Raw::App(label, Box::new(acc), Box::new(arg));
            if last {
                break;
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Raw::Var(Name::new(&s)))
            }
            Tok::LParen => {
                if *self.peek_at(1) == Tok::Lambda && *self.peek_at(2) == Tok::Star {
                    return self.marked_redex();
                }
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lambda => self.unexpected("a variable or '('; parenthesize the abstraction"),
            _ => self.unexpected("a variable or '('"),
        }
    }

    fn marked_redex(&mut self) -> Result<Raw, ParseError> {
        if self.grammar != Grammar::Marked {
            return self.error("marked redexes are only allowed in marked terms");
        }
        self.expect(Tok::LParen)?;
        self.expect(Tok::Lambda)?;
        self.expect(Tok::Star)?;
        let x = self.ident("a variable after '\\*'")?;
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        self.expect(Tok::RParen)?;
        if !self.starts_atom() || *self.peek() == Tok::Lambda {
            return self.unexpected("the argument of the marked redex");
        }
        let arg = self.atom()?;
        Ok(Raw::Marked(x, Box::new(body), Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_grammar() {
        assert_eq!(
            parse_term("\\x. x x").unwrap(),
            Term::abs("x", Term::app(Term::var("x"), Term::var("x")))
        );
        assert_eq!(
            parse_term("(\\x. x) y").unwrap(),
            Term::app(Term::abs("x", Term::var("x")), Term::var("y"))
        );
        assert_eq!(parse_term("a b c").unwrap(), parse_term("(a b) c").unwrap());
        assert_ne!(parse_term("a b c").unwrap(), parse_term("a (b c)").unwrap());
        assert_eq!(parse_term("f λx. x").unwrap(), parse_term("f (\\x. x)").unwrap());
    }

    #[test]
    fn shadowed_binder_is_renamed() {
        let t = parse_term("\\x. \\x. x").unwrap();
        match &t {
            Term::Abs(x, b) => match &**b {
                Term::Abs(y, body) => {
                    assert_ne!(x, y);
                    assert_eq!(**body, Term::Var(y.clone()));
                }
                _ => panic!("{t}"),
            },
            _ => panic!("{t}"),
        }
        assert!(t.is_barendregt());
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_term("(\\x. x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = parse_term("x\n  ) ").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(parse_term("\\x x").is_err());
        assert!(parse_term("x @a y").is_err());
        assert!(parse_term("1x").is_err());
    }

    #[test]
    fn labeled_grammar() {
        let t = parse_labeled("(\\x^a. x) @a y").unwrap();
        assert_eq!(t.to_string(), "(\\x^a. x) @a y");
        let t = parse_labeled("\\x^*. x").unwrap();
        assert_eq!(t.to_string(), "\\x^*. x");
        assert!(parse_labeled("x @* y").is_err());
        assert!(parse_labeled("x y").is_err());
        assert!(parse_labeled("\\x. x").is_err());
        assert_eq!(
            parse_labeled("x @a y @b z").unwrap(),
            parse_labeled("(x @a y) @b z").unwrap()
        );
    }

    #[test]
    fn marked_grammar() {
        let t = parse_marked("(\\*x. x) y").unwrap();
        assert!(matches!(t, MTerm::Marked(..)));
        assert_eq!(t.to_string(), "(\\*x. x) y");
        let t = parse_marked("(\\*x. x) (\\y. y) z").unwrap();
        assert_eq!(t.to_string(), "(\\*x. x) (\\y. y) z");
        assert!(parse_marked("\\*x. x").is_err());
        assert!(parse_marked("(\\*x. x)").is_err());
        assert!(parse_term("(\\*x. x) y").is_err());
    }

    #[test]
    fn grammar_detection() {
        assert_eq!(Grammar::detect("x @a y"), Grammar::Labeled);
        assert_eq!(Grammar::detect("(\\*x. x) y"), Grammar::Marked);
        assert_eq!(Grammar::detect("\\x. x"), Grammar::Plain);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::arb::{arb_labeled, arb_term};
    use crate::marked::mark_initial;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn printing_then_parsing(m in arb_term(), a in arb_labeled()) {
            prop_assert_eq!(parse_term(&m.to_string()).unwrap(), m.clone());
            prop_assert_eq!(parse_labeled(&a.to_string()).unwrap(), a);
            let mk = mark_initial(&m);
            prop_assert_eq!(parse_marked(&mk.to_string()).unwrap(), mk);
        }
    }
}
