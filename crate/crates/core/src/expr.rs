//! Symbolic scalar fields over chart coordinates.
//!
//! A [`ScalarField`] is an immutable, reference-counted expression DAG. Nodes
//! are combined through folding constructors, so `0 * f` collapses to `0`
//! and constant subtrees are evaluated exactly over the rationals. Nothing
//! beyond that is simplified: identities are checked by evaluating at sample
//! points, never by rewriting to a canonical form.
//!
//! Differentiation is exact and symbolic. Evaluation compiles the DAG into a
//! flat [`Tape`] so that shared subexpressions are computed once per point.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Elementary functions allowed in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Exact value at a rational argument, when it is rational.
    fn fold(self, c: Rational64) -> Option<Rational64> {
        let zero = c.is_zero();
        let one = c.is_one();
        match self {
            Func::Sin | Func::Tan | Func::Sinh | Func::Sqrt if zero => Some(Rational64::zero()),
            Func::Cos | Func::Cosh | Func::Exp if zero => Some(Rational64::one()),
            Func::Log | Func::Sqrt if one => Some(if self == Func::Log {
                Rational64::zero()
            } else {
                Rational64::one()
            }),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum Node {
    Const(Rational64),
    Var(usize),
    Add(ScalarField, ScalarField),
    Sub(ScalarField, ScalarField),
    Mul(ScalarField, ScalarField),
    Div(ScalarField, ScalarField),
    Pow(ScalarField, i32),
    Neg(ScalarField),
    Func(Func, ScalarField),
}

/// A smooth function on a chart, as an expression in the coordinates.
#[derive(Clone)]
pub struct ScalarField(Arc<Node>);

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self)
    }
}

/// Prints with generic coordinate names `x0, x1, ...`.
impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_var().unwrap_or(0))
            .map(|i| format!("x{i}"))
            .collect();
        f.write_str(&self.to_source(&names))
    }
}

fn rat_add(a: Rational64, b: Rational64) -> Option<Rational64> {
    let num = (*a.numer() as i128) * (*b.denom() as i128) + (*b.numer() as i128) * (*a.denom() as i128);
    let den = (*a.denom() as i128) * (*b.denom() as i128);
    rat_from_i128(num, den)
}

fn rat_mul(a: Rational64, b: Rational64) -> Option<Rational64> {
    let num = (*a.numer() as i128) * (*b.numer() as i128);
    let den = (*a.denom() as i128) * (*b.denom() as i128);
    rat_from_i128(num, den)
}

fn rat_from_i128(num: i128, den: i128) -> Option<Rational64> {
    if den == 0 {
        return None;
    }
    let g = gcd_i128(num.abs(), den.abs()).max(1);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    Some(Rational64::new_raw(i64::try_from(n).ok()?, i64::try_from(d).ok()?))
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl ScalarField {
    fn node(n: Node) -> Self {
        ScalarField(Arc::new(n))
    }

    pub fn kind(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Rational64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational64::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational64::new(n, d))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The `i`-th chart coordinate.
    pub fn var(i: usize) -> Self {
        Self::node(Node::Var(i))
    }

    pub fn as_const(&self) -> Option<Rational64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    pub fn ptr_eq(&self, other: &ScalarField) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn key(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    pub fn add(&self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            if let Some(c) = rat_add(a, b) {
                return Self::constant(c);
            }
        }
        Self::node(Node::Add(self.clone(), rhs.clone()))
    }

    pub fn sub(&self, rhs: &ScalarField) -> ScalarField {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.neg();
        }
        if self.ptr_eq(rhs) {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            if let Some(c) = rat_add(a, -b) {
                return Self::constant(c);
            }
        }
        Self::node(Node::Sub(self.clone(), rhs.clone()))
    }

    pub fn mul(&self, rhs: &ScalarField) -> ScalarField {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            if let Some(c) = rat_mul(a, b) {
                return Self::constant(c);
            }
        }
        if self.as_const() == Some(-Rational64::one()) {
            return rhs.neg();
        }
        if rhs.as_const() == Some(-Rational64::one()) {
            return self.neg();
        }
        Self::node(Node::Mul(self.clone(), rhs.clone()))
    }

    pub fn div(&self, rhs: &ScalarField) -> ScalarField {
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_zero() && !rhs.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            if !b.is_zero() {
                if let Some(c) = rat_mul(a, b.recip()) {
                    return Self::constant(c);
                }
            }
        }
        Self::node(Node::Div(self.clone(), rhs.clone()))
    }

    pub fn neg(&self) -> ScalarField {
        match &*self.0 {
            Node::Const(c) => Self::constant(-*c),
            Node::Neg(inner) => inner.clone(),
            _ => Self::node(Node::Neg(self.clone())),
        }
    }

    pub fn powi(&self, n: i32) -> ScalarField {
        if n == 0 {
            return Self::one();
        }
        if n == 1 {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            if !(c.is_zero() && n < 0) {
                let mut acc = Some(Rational64::one());
                let base = if n < 0 { c.recip() } else { c };
                for _ in 0..n.unsigned_abs() {
                    acc = acc.and_then(|a| rat_mul(a, base));
                }
                if let Some(v) = acc {
                    return Self::constant(v);
                }
            }
        }
        Self::node(Node::Pow(self.clone(), n))
    }

    pub fn apply(&self, f: Func) -> ScalarField {
        if let Some(v) = self.as_const().and_then(|c| f.fold(c)) {
            return Self::constant(v);
        }
        Self::node(Node::Func(f, self.clone()))
    }

    pub fn sin(&self) -> ScalarField {
        self.apply(Func::Sin)
    }
    pub fn cos(&self) -> ScalarField {
        self.apply(Func::Cos)
    }
    pub fn tan(&self) -> ScalarField {
        self.apply(Func::Tan)
    }
    pub fn exp(&self) -> ScalarField {
        self.apply(Func::Exp)
    }
    pub fn log(&self) -> ScalarField {
        self.apply(Func::Log)
    }
    pub fn sqrt(&self) -> ScalarField {
        self.apply(Func::Sqrt)
    }
    pub fn sinh(&self) -> ScalarField {
        self.apply(Func::Sinh)
    }
    pub fn cosh(&self) -> ScalarField {
        self.apply(Func::Cosh)
    }

    /// Scales by a rational constant.
    pub fn scale(&self, c: Rational64) -> ScalarField {
        Self::constant(c).mul(self)
    }

    pub fn half(&self) -> ScalarField {
        self.scale(Rational64::new(1, 2))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a ScalarField>>(items: I) -> ScalarField {
        items
            .into_iter()
            .fold(ScalarField::zero(), |acc, t| acc.add(t))
    }

    /// Sum of pairwise products, skipping structurally zero factors.
    pub fn dot<'a, I>(pairs: I) -> ScalarField
    where
        I: IntoIterator<Item = (&'a ScalarField, &'a ScalarField)>,
    {
        pairs
            .into_iter()
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(ScalarField::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    /// Highest coordinate index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        let mut best = None;
        self.visit(&mut |n| {
            if let Node::Var(i) = n {
                best = Some(best.map_or(*i, |b: usize| b.max(*i)));
            }
        });
        best
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn visit(&self, f: &mut dyn FnMut(&Node)) {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            f(&e.0);
            match &*e.0 {
                Node::Const(_) | Node::Var(_) => {}
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Pow(a, _) | Node::Neg(a) | Node::Func(_, a) => stack.push(a.clone()),
            }
        }
    }

    /// Exact partial derivative with respect to coordinate `i`.
    pub fn partial(&self, i: usize) -> ScalarField {
        let mut memo = HashMap::new();
        self.partial_memo(i, &mut memo)
    }

    fn partial_memo(&self, i: usize, memo: &mut HashMap<*const Node, ScalarField>) -> ScalarField {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let d = match &*self.0 {
            Node::Const(_) => ScalarField::zero(),
            Node::Var(j) => {
                if *j == i {
                    ScalarField::one()
                } else {
                    ScalarField::zero()
                }
            }
            Node::Add(a, b) => a.partial_memo(i, memo).add(&b.partial_memo(i, memo)),
            Node::Sub(a, b) => a.partial_memo(i, memo).sub(&b.partial_memo(i, memo)),
            Node::Mul(a, b) => {
                let da = a.partial_memo(i, memo);
                let db = b.partial_memo(i, memo);
                da.mul(b).add(&a.mul(&db))
            }
            Node::Div(a, b) => {
                let da = a.partial_memo(i, memo);
                let db = b.partial_memo(i, memo);
                if db.is_zero() {
                    da.div(b)
                } else {
                    da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
                }
            }
            Node::Pow(a, n) => {
                let da = a.partial_memo(i, memo);
                ScalarField::int(*n as i64).mul(&a.powi(n - 1)).mul(&da)
            }
            Node::Neg(a) => a.partial_memo(i, memo).neg(),
            Node::Func(f, a) => {
                let da = a.partial_memo(i, memo);
                if da.is_zero() {
                    ScalarField::zero()
                } else {
                    let outer = match f {
                        Func::Sin => a.cos(),
                        Func::Cos => a.sin().neg(),
                        Func::Tan => ScalarField::one().add(&self.powi(2)),
                        Func::Exp => self.clone(),
                        Func::Log => ScalarField::one().div(a),
                        Func::Sqrt => ScalarField::one().div(&ScalarField::int(2).mul(self)),
                        Func::Sinh => a.cosh(),
                        Func::Cosh => a.sinh(),
                    };
                    outer.mul(&da)
                }
            }
        };
        memo.insert(self.key(), d.clone());
        d
    }

    /// Source text in the expression grammar, using the given coordinate names.
    pub fn to_source(&self, names: &[String]) -> String {
        let mut out = String::new();
        self.write_source(names, &mut out);
        out
    }

    fn write_source(&self, names: &[String], out: &mut String) {
        match &*self.0 {
            Node::Const(c) => {
                if c.is_integer() && !c.is_negative() {
                    out.push_str(&c.numer().to_string());
                } else if c.is_integer() {
                    out.push_str(&format!("(-{})", c.numer().abs()));
                } else if c.is_negative() {
                    out.push_str(&format!("(-{}/{})", c.numer().abs(), c.denom()));
                } else {
                    out.push_str(&format!("({}/{})", c.numer(), c.denom()));
                }
            }
            Node::Var(i) => match names.get(*i) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("x{i}")),
            },
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let op = match &*self.0 {
                    Node::Add(..) => " + ",
                    Node::Sub(..) => " - ",
                    Node::Mul(..) => " * ",
                    _ => " / ",
                };
                out.push('(');
                a.write_source(names, out);
                out.push_str(op);
                b.write_source(names, out);
                out.push(')');
            }
            Node::Pow(a, n) => {
                out.push('(');
                a.write_source(names, out);
                out.push_str(&format!(")^{n}"));
            }
            Node::Neg(a) => {
                out.push_str("(-");
                a.write_source(names, out);
                out.push(')');
            }
            Node::Func(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_source(names, out);
                out.push(')');
            }
        }
    }

    pub fn compile(&self) -> Tape {
        Tape::new(self)
    }

    /// Evaluates at a point. Compiles a tape on every call; prefer
    /// [`ScalarField::compile`] when evaluating at many points.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.compile().eval(point)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                ScalarField::$method(self, rhs)
            }
        }
        impl $tr<ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                ScalarField::$method(&self, &rhs)
            }
        }
        impl $tr<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                ScalarField::$method(&self, rhs)
            }
        }
        impl $tr<ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                ScalarField::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField::neg(&self)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField::neg(self)
    }
}

impl From<i64> for ScalarField {
    fn from(n: i64) -> Self {
        ScalarField::int(n)
    }
}

/// Why an evaluation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    DivisionByZero,
    LogNonPositive,
    SqrtNegative,
    PointDimension,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::LogNonPositive => "log of nonpositive value",
            DomainKind::SqrtNegative => "sqrt of negative value",
            DomainKind::PointDimension => "point has too few coordinates",
        })
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{kind} at node `{node}`")]
pub struct EvalError {
    pub kind: DomainKind,
    pub node: ScalarField,
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Const(f64),
    Var(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, i32),
    Neg(usize),
    Func(Func, usize),
}

/// A DAG flattened into topological order; each shared node is evaluated once.
#[derive(Debug, Clone)]
pub struct Tape {
    instrs: Vec<Instr>,
    nodes: Vec<ScalarField>,
    needs_dim: usize,
}

impl Tape {
    fn new(root: &ScalarField) -> Self {
        let mut slots: HashMap<*const Node, usize> = HashMap::new();
        let mut instrs = Vec::new();
        let mut nodes = Vec::new();
        let mut needs_dim = 0;
        // Iterative post-order: (node, children_pushed)
        let mut stack: Vec<(ScalarField, bool)> = vec![(root.clone(), false)];
        while let Some((e, expanded)) = stack.pop() {
            if slots.contains_key(&e.key()) {
                continue;
            }
            let children: Vec<&ScalarField> = match &*e.0 {
                Node::Const(_) | Node::Var(_) => vec![],
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    vec![a, b]
                }
                Node::Pow(a, _) | Node::Neg(a) | Node::Func(_, a) => vec![a],
            };
            if !expanded && children.iter().any(|c| !slots.contains_key(&c.key())) {
                stack.push((e.clone(), true));
                for c in children {
                    if !slots.contains_key(&c.key()) {
                        stack.push((c.clone(), false));
                    }
                }
                continue;
            }
            let s = |c: &ScalarField| slots[&c.key()];
            let instr = match &*e.0 {
                Node::Const(c) => Instr::Const(c.to_f64().unwrap_or(f64::NAN)),
                Node::Var(i) => {
                    needs_dim = needs_dim.max(i + 1);
                    Instr::Var(*i)
                }
                Node::Add(a, b) => Instr::Add(s(a), s(b)),
                Node::Sub(a, b) => Instr::Sub(s(a), s(b)),
                Node::Mul(a, b) => Instr::Mul(s(a), s(b)),
                Node::Div(a, b) => Instr::Div(s(a), s(b)),
                Node::Pow(a, n) => Instr::Pow(s(a), *n),
                Node::Neg(a) => Instr::Neg(s(a)),
                Node::Func(f, a) => Instr::Func(*f, s(a)),
            };
            slots.insert(e.key(), instrs.len());
            instrs.push(instr);
            nodes.push(e.clone());
        }
        Tape {
            instrs,
            nodes,
            needs_dim,
        }
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let mut regs = Vec::with_capacity(self.instrs.len());
        self.eval_with(point, &mut regs)
    }

    /// Evaluates reusing a scratch buffer.
    pub fn eval_with(&self, point: &[f64], regs: &mut Vec<f64>) -> Result<f64, EvalError> {
        if point.len() < self.needs_dim {
            return Err(EvalError {
                kind: DomainKind::PointDimension,
                node: self.nodes.last().cloned().unwrap_or_else(ScalarField::zero),
            });
        }
        regs.clear();
        for (k, ins) in self.instrs.iter().enumerate() {
            let fail = |kind| EvalError {
                kind,
                node: self.nodes[k].clone(),
            };
            let v = match *ins {
                Instr::Const(c) => c,
                Instr::Var(i) => point[i],
                Instr::Add(a, b) => regs[a] + regs[b],
                Instr::Sub(a, b) => regs[a] - regs[b],
                Instr::Mul(a, b) => regs[a] * regs[b],
                Instr::Div(a, b) => {
                    if regs[b] == 0.0 {
                        return Err(fail(DomainKind::DivisionByZero));
                    }
                    regs[a] / regs[b]
                }
                Instr::Pow(a, n) => {
                    if n < 0 && regs[a] == 0.0 {
                        return Err(fail(DomainKind::DivisionByZero));
                    }
                    regs[a].powi(n)
                }
                Instr::Neg(a) => -regs[a],
                Instr::Func(f, a) => {
                    let x = regs[a];
                    match f {
                        Func::Sin => x.sin(),
                        Func::Cos => x.cos(),
                        Func::Tan => x.tan(),
                        Func::Exp => x.exp(),
                        Func::Log => {
                            if x <= 0.0 {
                                return Err(fail(DomainKind::LogNonPositive));
                            }
                            x.ln()
                        }
                        Func::Sqrt => {
                            if x < 0.0 {
                                return Err(fail(DomainKind::SqrtNegative));
                            }
                            x.sqrt()
                        }
                        Func::Sinh => x.sinh(),
                        Func::Cosh => x.cosh(),
                    }
                }
            };
            regs.push(v);
        }
        Ok(regs.last().copied().unwrap_or(0.0))
    }
}
