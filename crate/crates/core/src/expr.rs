//! Text syntax for monomial ideals.
//!
//! ```text
//! input    := "n" "=" int ";" expr
//! expr     := factor ("*" factor)*
//! factor   := atom ("^" int | "[" int "]")*
//! atom     := "(" [monomial ("," monomial)*] ")" | "pborel" "(" monomial ";" int ")" | "1"
//! monomial := "1" | var ("*" var)*
//! var      := "x" int ["^" int]
//! ```
//!
//! `()` is the zero ideal, `1` and `(1)` the unit ideal, `[q]` a Frobenius power.
//! Text after `#` on a line is ignored.

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;
use crate::pborel::PBorelFactorization;

/// Byte range plus the line and column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Generators(Vec<Monomial>),
    PBorel { monomial: Monomial, p: u64 },
    Product(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, u32),
    Frobenius(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// A parsed `n=..; expr` input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealExpression {
    pub n: usize,
    pub expr: Expr,
}

impl IdealExpression {
    pub fn evaluate(&self) -> Result<MonomialIdeal> {
        eval(&self.expr, self.n)
    }
}

fn eval(e: &Expr, n: usize) -> Result<MonomialIdeal> {
    let located = |err: Error| match err {
        Error::Parse { .. } => err,
        other => Error::Parse {
            line: e.span.line,
            column: e.span.column,
            message: other.to_string(),
        },
    };
    match &e.kind {
        ExprKind::Generators(gens) => MonomialIdeal::minimalize(n, gens.iter().cloned()).map_err(located),
        ExprKind::PBorel { monomial, p } => PBorelFactorization::principal(monomial, *p)
            .and_then(|f| f.expand())
            .map_err(located),
        ExprKind::Product(a, b) => eval(a, n)?.product(&eval(b, n)?).map_err(located),
        ExprKind::Power(a, k) => eval(a, n)?.power(*k).map_err(located),
        ExprKind::Frobenius(a, q) => {
            if *q == 0 {
                return Err(located(Error::InvalidArgument("Frobenius exponent must be positive".into())));
            }
            eval(a, n)?.frobenius_power(*q).map_err(located)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, Span)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        let span = |end: usize, line, column| Span {
            start: pos,
            end,
            line,
            column,
        };
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k].1 != '\n' {
                k += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            let mut end = pos;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(chars[k].1 as u64 - '0' as u64))
                    .ok_or(Error::Parse {
                        line,
                        column: start_col,
                        message: "integer too large".into(),
                    })?;
                end = chars[k].0 + 1;
                k += 1;
                col += 1;
            }
            toks.push((Tok::Int(v), span(end, line, start_col)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            if c == 'x' && chars.get(k + 1).is_some_and(|(_, d)| d.is_ascii_digit()) {
                toks.push((Tok::Ident("x".into()), span(pos + 1, line, start_col)));
                k += 1;
                col += 1;
                continue;
            }
            let mut word = String::new();
            let mut end = pos;
            while k < chars.len() && chars[k].1.is_ascii_alphanumeric() {
                word.push(chars[k].1);
                end = chars[k].0 + 1;
                k += 1;
                col += 1;
            }
            toks.push((Tok::Ident(word), span(end, line, start_col)));
            continue;
        }
        if "()[];,*^=".contains(c) {
            toks.push((Tok::Sym(c), span(pos + 1, line, start_col)));
            k += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse {
            line,
            column: col,
            message: format!("unexpected character '{c}'"),
        });
    }
    toks.push((
        Tok::End,
        Span {
            start: text.len(),
            end: text.len(),
            line,
            column: col,
        },
    ));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        self.toks[self.pos.saturating_sub(1)].1.end
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = self.span();
        Err(Error::Parse {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Int(v) => format!("'{v}'"),
            Tok::Ident(w) => format!("'{w}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}', found {}", self.describe()))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match *self.peek() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(v)
            }
            _ => self.error(format!("expected a non-negative integer, found {}", self.describe())),
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        let s = self.span();
        let v = self.int()?;
        u32::try_from(v).map_err(|_| Error::Parse {
            line: s.line,
            column: s.column,
            message: "integer too large".into(),
        })
    }

    fn header(&mut self) -> Result<usize> {
        if *self.peek() != Tok::Ident("n".into()) {
            return self.error("input must start with 'n=<number of variables>;'");
        }
        self.pos += 1;
        self.expect('=')?;
        let s = self.span();
        let n = self.int()?;
        if n == 0 || n > crate::koszul::subset::MAX_VARS as u64 {
            return Err(Error::Parse {
                line: s.line,
                column: s.column,
                message: format!("n must be between 1 and {}", crate::koszul::subset::MAX_VARS),
            });
        }
        self.expect(';')?;
        Ok(n as usize)
    }

    fn variable(&mut self, exps: &mut [u32]) -> Result<()> {
        let s = self.span();
        self.pos += 1;
        let index = self.int()?;
        if index == 0 || index > self.n as u64 {
            return Err(Error::Parse {
                line: s.line,
                column: s.column,
                message: format!("variable x{index} outside x1..x{}", self.n),
            });
        }
        let e = if self.eat('^') { self.small_int()? } else { 1 };
        let slot = &mut exps[index as usize - 1];
        *slot = slot.checked_add(e).ok_or(Error::ExponentOverflow)?;
        Ok(())
    }

    /// A monomial; inside a product it stops before `*` not followed by a variable.
    fn monomial(&mut self) -> Result<Monomial> {
        let mut exps = vec![0u32; self.n];
        match self.peek() {
            Tok::Int(1) => {
                self.pos += 1;
                return Ok(Monomial::new(exps));
            }
            Tok::Ident(w) if w == "x" => self.variable(&mut exps)?,
            _ => return self.error(format!("expected a monomial, found {}", self.describe())),
        }
        while *self.peek() == Tok::Sym('*') && self.toks[self.pos + 1].0 == Tok::Ident("x".into()) {
            self.pos += 1;
            self.variable(&mut exps)?;
        }
        Ok(Monomial::new(exps))
    }

    fn atom(&mut self) -> Result<Expr> {
        let s = self.span();
        let kind = match self.peek().clone() {
            Tok::Sym('(') => {
                self.pos += 1;
                let mut gens = Vec::new();
                if !self.eat(')') {
                    loop {
                        gens.push(self.monomial()?);
                        if self.eat(')') {
                            break;
                        }
                        if !self.eat(',') {
                            return self.error(format!("expected ',' or ')', found {}", self.describe()));
                        }
                    }
                }
                ExprKind::Generators(gens)
            }
            Tok::Int(1) => {
                self.pos += 1;
                ExprKind::Generators(vec![Monomial::one(self.n)])
            }
            Tok::Ident(w) if w == "pborel" => {
                self.pos += 1;
                self.expect('(')?;
                let monomial = self.monomial()?;
                self.expect(';')?;
                let ps = self.span();
                let p = self.int()?;
                if !crate::padic::is_prime(p) {
                    return Err(Error::Parse {
                        line: ps.line,
                        column: ps.column,
                        message: format!("{p} is not prime"),
                    });
                }
                self.expect(')')?;
                ExprKind::PBorel { monomial, p }
            }
            Tok::Ident(w) if w == "x" => {
                let monomial = self.monomial()?;
                ExprKind::Generators(vec![monomial])
            }
            _ => return self.error(format!("expected an ideal, found {}", self.describe())),
        };
        Ok(Expr {
            kind,
            span: Span { end: self.prev_end(), ..s },
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        let s = self.span();
        let mut e = self.atom()?;
        loop {
            let kind = if self.eat('^') {
                ExprKind::Power(Box::new(e), self.small_int()?)
            } else if self.eat('[') {
                let q = self.small_int()?;
                self.expect(']')?;
                ExprKind::Frobenius(Box::new(e), q)
            } else {
                break;
            };
            e = Expr {
                kind,
                span: Span { end: self.prev_end(), ..s },
            };
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let s = self.span();
        let mut e = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            e = Expr {
                kind: ExprKind::Product(Box::new(e), Box::new(rhs)),
                span: Span { end: self.prev_end(), ..s },
            };
        }
        Ok(e)
    }
}

/// Parses `n=<int>; expr`.
pub fn parse_ideal(text: &str) -> Result<IdealExpression> {
    let mut p = Parser {
        toks: lex(text)?.toks,
        pos: 0,
        n: 0,
    };
    p.n = p.header()?;
    let expr = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {} after the expression", p.describe()));
    }
    Ok(IdealExpression { n: p.n, expr })
}

/// Parses and evaluates in one step.
pub fn parse_and_evaluate(text: &str) -> Result<MonomialIdeal> {
    parse_ideal(text)?.evaluate()
}

/// Parses a monomial such as `x1^2*x3` in `n` variables.
pub fn parse_monomial(text: &str, n: usize) -> Result<Monomial> {
    let mut p = Parser {
        toks: lex(text)?.toks,
        pos: 0,
        n,
    };
    let m = p.monomial()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {} after the monomial", p.describe()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn product_with_frobenius_power() {
        let i = parse_and_evaluate("n=4; (x1,x2)*(x1,x2,x3,x4)[2]").unwrap();
        let expected = PBorelFactorization::principal(&m(&[0, 1, 0, 2]), 2).unwrap().expand().unwrap();
        assert_eq!(i, expected);
    }

    #[test]
    fn pborel_macro() {
        let i = parse_and_evaluate("n=3; pborel(x3^3; 2)").unwrap();
        let mm = MonomialIdeal::maximal(3);
        assert_eq!(i, mm.frobenius_power(2).unwrap().product(&mm).unwrap());
    }

    #[test]
    fn power_of_two_variable_ideal() {
        let i = parse_and_evaluate("n=2; (x1,x2)^4").unwrap();
        assert_eq!(i.gens().len(), 5);
        assert!(i.gens().iter().all(|g| g.degree() == 4));
    }

    #[test]
    fn special_ideals_and_comments() {
        assert!(parse_and_evaluate("n=3; ()").unwrap().is_zero());
        assert!(parse_and_evaluate("n=3; 1").unwrap().is_unit());
        assert!(parse_and_evaluate("n=3; (1)").unwrap().is_unit());
        let i = parse_and_evaluate("# three variables\nn=3;\n  (x1*x2^2, x3) # trailing\n").unwrap();
        assert_eq!(i.gens(), &[m(&[1, 2, 0]), m(&[0, 0, 1])][..]);
        assert_eq!(parse_and_evaluate("n=2; x1*x2").unwrap().gens(), &[m(&[1, 1])][..]);
        assert_eq!(
            parse_and_evaluate("n=2; x1*(x1,x2)").unwrap(),
            parse_and_evaluate("n=2; (x1^2,x1*x2)").unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_ideal("n=3; (x1,x4)").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 10,
                message: "variable x4 outside x1..x3".into()
            }
        );
        assert!(matches!(parse_ideal("n=3;\n(x1,,x2)"), Err(Error::Parse { line: 2, column: 5, .. })));
        assert!(matches!(parse_ideal("n=3; (x1^-1)"), Err(Error::Parse { line: 1, column: 10, .. })));
        assert!(matches!(parse_ideal("(x1)"), Err(Error::Parse { line: 1, column: 1, .. })));
        assert!(matches!(parse_ideal("n=3; pborel(x1; 4)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ideal("n=3; (x1) )"), Err(Error::Parse { .. })));
        assert!(matches!(parse_and_evaluate("n=3; (x1)[0]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn spans_cover_subexpressions() {
        let e = parse_ideal("n=2; (x1)^2*(x2)").unwrap().expr;
        assert_eq!((e.span.start, e.span.end), (5, 16));
        let ExprKind::Product(lhs, _) = e.kind else { panic!() };
        assert_eq!((lhs.span.start, lhs.span.end), (5, 11));
    }

    fn arb_ideal() -> impl Strategy<Value = MonomialIdeal> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(0u32..4, n), 0..5)
                .prop_map(move |gens| MonomialIdeal::minimalize(n, gens.into_iter().map(Monomial::new)).unwrap())
        })
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(i in arb_ideal()) {
            let text = i.render();
            let back = parse_and_evaluate(&text).unwrap();
            prop_assert_eq!(&back, &i);
            prop_assert_eq!(back.render(), text);
        }
    }
}
