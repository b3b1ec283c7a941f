//! Expression parser. Text is read into a small syntax tree first; the atoms
//! then decide which algebra the tree is evaluated in.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' signed-int)?
//! atom   := z[i,j] | zs[i,j] | zeta[i,j] | zetas[i,j] | t[i,j]
//!         | q | v | integer | '(' expr ')'
//! ```
//!
//! `/` only divides by scalars, and negative exponents only apply to scalars,
//! so every rendered normal form parses back to itself.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use qball::polmat::pol_algebra;
use qball::qmatrix::matrix_algebra;
use qball::{Algebra, GenClass, GeneratorId, NCPoly, VScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

/// Algebra an expression was evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraTag {
    /// No generators: an element of ℚ(v).
    Scalar,
    /// z and zs atoms: Pol(Mat_n)_q.
    Pol,
    /// zeta and zetas atoms: the same relations on the boundary alphabet.
    PolZeta,
    /// t atoms: C[Mat_{n,2n}]_q.
    Rect,
}

impl AlgebraTag {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraTag::Scalar => "scalar",
            AlgebraTag::Pol => "pol",
            AlgebraTag::PolZeta => "pol-zeta",
            AlgebraTag::Rect => "rect",
        }
    }

    fn of(class: GenClass) -> AlgebraTag {
        match class {
            GenClass::Z | GenClass::ZStar => AlgebraTag::Pol,
            GenClass::Zeta | GenClass::ZetaStar => AlgebraTag::PolZeta,
            GenClass::T => AlgebraTag::Rect,
        }
    }

    pub fn algebra(self, n: u8) -> Algebra {
        match self {
            AlgebraTag::Scalar | AlgebraTag::Pol => pol_algebra(n, GenClass::Z),
            AlgebraTag::PolZeta => pol_algebra(n, GenClass::Zeta),
            AlgebraTag::Rect => matrix_algebra(GenClass::T, n, 2 * n),
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    V,
    Q,
    Gen(GeneratorId),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    /// Divisor position kept for error messages.
    Div(Box<Node>, Box<Node>, usize),
    Pow(Box<Node>, i32, usize),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    atoms: Vec<(GeneratorId, usize)>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |x| format!("'{x}'"));
            err(self.pos, format!("expected '{c}', found {found}"))
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return err(start, "expected a number");
        }
        self.pos += len;
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Node::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Node::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = Node::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.peek() == Some('/') {
                self.pos += 1;
                let at = self.pos;
                acc = Node::Div(Box::new(acc), Box::new(self.factor()?), at);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.pos;
            let neg = if self.eat('-') {
                true
            } else {
                self.eat('+');
                false
            };
            let e: i32 = match i32::try_from(self.digits()?) {
                Ok(e) => e,
                Err(_) => return err(at, "exponent too large"),
            };
            return Ok(Node::Pow(Box::new(base), if neg { -e } else { e }, at));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => err(start, "unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Node::Int(self.digits()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let len = self.src[start..].bytes().take_while(u8::is_ascii_alphabetic).count();
                let name = &self.src[start..start + len];
                self.pos += len;
                let class = match name {
                    "q" => return Ok(Node::Q),
                    "v" => return Ok(Node::V),
                    "z" => GenClass::Z,
                    "zs" => GenClass::ZStar,
                    "zeta" => GenClass::Zeta,
                    "zetas" => GenClass::ZetaStar,
                    "t" => GenClass::T,
                    _ => return err(start, format!("unknown symbol '{name}'")),
                };
                self.expect('[')?;
                let i = self.index()?;
                self.expect(',')?;
                let j = self.index()?;
                self.expect(']')?;
                let id = GeneratorId::new(class, i, j);
                self.atoms.push((id, start));
                Ok(Node::Gen(id))
            }
            Some(c) => err(start, format!("unexpected '{c}'")),
        }
    }

    fn index(&mut self) -> Result<u8, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let d = self.digits()?;
        u8::try_from(d).or_else(|_| err(at, "index out of range"))
    }
}

/// Parses and normalizes `text`; generator indices are checked against `n`.
pub fn parse_expr(text: &str, n: u8) -> Result<(AlgebraTag, NCPoly), ParseError> {
    if n == 0 {
        return err(0, "n must be at least 1");
    }
    let mut p = Parser { src: text, pos: 0, atoms: Vec::new() };
    let tree = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return err(p.pos, format!("unexpected '{}'", text[p.pos..].chars().next().unwrap_or(' ')));
    }

    let mut tag = AlgebraTag::Scalar;
    for &(id, at) in &p.atoms {
        let t = AlgebraTag::of(id.class);
        if tag != AlgebraTag::Scalar && tag != t {
            return err(at, format!("{id} cannot be combined with {} atoms", tag.name()));
        }
        tag = t;
        let cols = if t == AlgebraTag::Rect { 2 * n } else { n };
        if !(1..=n).contains(&id.i) || !(1..=cols).contains(&id.j) {
            return err(at, format!("index out of range in {id}: need 1..={n} and 1..={cols}"));
        }
    }
    let alg = tag.algebra(n);
    let value = Eval { alg: &alg }.node(&tree)?;
    Ok((tag, value))
}

/// Renders a normal form in the syntax accepted by [`parse_expr`].
pub fn render(tag: AlgebraTag, n: u8, p: &NCPoly) -> String {
    tag.algebra(n).render(p)
}

struct Eval<'a> {
    alg: &'a Algebra,
}

impl Eval<'_> {
    fn node(&self, node: &Node) -> Result<NCPoly, ParseError> {
        Ok(match node {
            Node::Int(k) => NCPoly::scalar(VScalar::from_rational(&BigRational::from_integer(k.clone()))),
            Node::V => NCPoly::scalar(VScalar::v_pow(1)),
            Node::Q => NCPoly::scalar(VScalar::q_pow(1)),
            Node::Gen(id) => self.alg.generator(*id).expect("indices checked before evaluation"),
            Node::Neg(a) => self.node(a)?.scale(&VScalar::from_int(-1)),
            Node::Add(a, b) => &self.node(a)? + &self.node(b)?,
            Node::Sub(a, b) => &self.node(a)? - &self.node(b)?,
            Node::Mul(a, b) => self.alg.mul(&self.node(a)?, &self.node(b)?),
            Node::Div(a, b, at) => {
                let d = scalar_of(&self.node(b)?).ok_or_else(|| ParseError {
                    pos: *at,
                    message: "divisor must be a scalar".into(),
                })?;
                let inv = d.checked_inv().or_else(|_| err(*at, "division by zero"))?;
                self.node(a)?.scale(&inv)
            }
            Node::Pow(a, e, at) => {
                let base = self.node(a)?;
                match scalar_of(&base) {
                    Some(c) if *e < 0 => {
                        if c.is_zero() {
                            return err(*at, "zero raised to a negative power");
                        }
                        NCPoly::scalar(c.pow(*e))
                    }
                    _ if *e < 0 => return err(*at, "negative exponent on a non-scalar"),
                    _ => self.alg.pow(&base, *e as u32),
                }
            }
        })
    }
}

/// The coefficient of the empty word when that is the only term.
fn scalar_of(p: &NCPoly) -> Option<VScalar> {
    match p.len() {
        0 => Some(VScalar::zero()),
        1 => {
            let (w, c) = p.terms().next()?;
            w.is_empty().then(|| c.clone())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_expr("z[1,1] + ", 1).unwrap_err().pos, 9);
        assert_eq!(parse_expr("2 * w", 1).unwrap_err().pos, 4);
        assert_eq!(parse_expr("(q", 1).unwrap_err().pos, 2);
    }

    #[test]
    fn rational_literals() {
        let (tag, p) = parse_expr("3/2 - 1/2", 1).unwrap();
        assert_eq!(tag, AlgebraTag::Scalar);
        assert_eq!(p.constant(), VScalar::one());
    }

    #[test]
    fn unary_minus_binds_to_factor() {
        let (_, a) = parse_expr("-q^2", 1).unwrap();
        let (_, b) = parse_expr("0 - q*q", 1).unwrap();
        assert_eq!(a, b);
    }
}
