//! Identities between noncommutative products of named operator series,
//! evaluated exactly in one or two spectral variables.
//!
//! A side is a sum of terms `coeff · Π_c 1/(u-v-c) · F_1 F_2 ⋯`, where each
//! factor is a named series (optionally inverted) in `u` or `v`, shifted by a
//! rational. Two-variable identities are compared twice: once after
//! multiplying both sides by `scale · Π_c (u-v-c)`, and once with every
//! `1/(u-v-c)` expanded geometrically in `u^{-1}`. The first is the verdict;
//! the second is an independent oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::exact::{BiComparison, BiSeries, OpMatrix, Rational, TruncSeries};
use crate::report::{Failure, Verdict};
use crate::{Error, Result};

pub type Series = TruncSeries<OpMatrix>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    U,
    V,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub key: String,
    pub var: Var,
    pub shift: Rational,
    pub inverse: bool,
}

impl Factor {
    pub fn u(key: impl Into<String>) -> Self {
        Factor {
            key: key.into(),
            var: Var::U,
            shift: Rational::zero(),
            inverse: false,
        }
    }

    pub fn v(key: impl Into<String>) -> Self {
        Factor {
            var: Var::V,
            ..Factor::u(key)
        }
    }

    pub fn at(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Evaluate at `var + c`.
    pub fn shifted(mut self, c: Rational) -> Self {
        self.shift = &self.shift + &c;
        self
    }

    pub fn inv(mut self) -> Self {
        self.inverse = !self.inverse;
        self
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.var {
            Var::U => "u",
            Var::V => "v",
        };
        write!(f, "{}", self.key)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        if self.shift.is_zero() {
            write!(f, "({var})")
        } else if self.shift.is_negative() {
            write!(f, "({var}-{})", self.shift.abs().compact())
        } else {
            write!(f, "({var}+{})", self.shift.compact())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Rational,
    /// Roots `c` of the denominators `(u-v-c)`, sorted.
    pub denoms: Vec<Rational>,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coeff: Rational, factors: Vec<Factor>) -> Self {
        Term {
            coeff,
            denoms: Vec::new(),
            factors,
        }
    }

    pub fn product(factors: Vec<Factor>) -> Self {
        Term::new(Rational::one(), factors)
    }

    /// The scalar `coeff · 1`.
    pub fn scalar(coeff: Rational) -> Self {
        Term::new(coeff, Vec::new())
    }

    /// Divide by `(u - v - c)`.
    pub fn over(mut self, c: Rational) -> Self {
        self.denoms.push(c);
        self.denoms.sort();
        self
    }

    pub fn scaled(mut self, c: &Rational) -> Self {
        self.coeff = &self.coeff * c;
        self
    }

    fn is_two_variable(&self) -> bool {
        !self.denoms.is_empty() || self.factors.iter().any(|f| f.var == Var::V)
    }
}

pub type Side = Vec<Term>;

/// `a·b - b·a` for products `a`, `b`.
pub fn commutator(a: &[Factor], b: &[Factor]) -> Side {
    vec![
        Term::product([a, b].concat()),
        Term::new(-Rational::one(), [b, a].concat()),
    ]
}

/// `a·b + b·a`.
pub fn anticommutator(a: &[Factor], b: &[Factor]) -> Side {
    vec![
        Term::product([a, b].concat()),
        Term::product([b, a].concat()),
    ]
}

/// `Σ coeff_i · factor_i` with single-factor terms.
pub fn linear(parts: &[(Rational, Factor)]) -> Side {
    parts
        .iter()
        .map(|(c, f)| Term::new(c.clone(), vec![f.clone()]))
        .collect()
}

/// Distribute the product of two sums of terms (denominators add up).
pub fn multiply(a: &[Term], b: &[Term]) -> Side {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let mut denoms = [x.denoms.clone(), y.denoms.clone()].concat();
            denoms.sort();
            out.push(Term {
                coeff: &x.coeff * &y.coeff,
                denoms,
                factors: [x.factors.clone(), y.factors.clone()].concat(),
            });
        }
    }
    out
}

pub fn scale_side(side: Side, c: &Rational) -> Side {
    side.into_iter().map(|t| t.scaled(c)).collect()
}

pub fn over_side(side: Side, c: &Rational) -> Side {
    side.into_iter().map(|t| t.over(c.clone())).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub label: String,
    pub lhs: Side,
    pub rhs: Side,
}

impl Instance {
    pub fn new(label: impl Into<String>, lhs: Side, rhs: Side) -> Self {
        Instance {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    fn is_two_variable(&self) -> bool {
        self.lhs.iter().chain(&self.rhs).any(Term::is_two_variable)
    }
}

/// A family of instances sharing one clearing polynomial
/// `scale · Π_c (u - v - c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub scale: Rational,
    pub clearing: Vec<Rational>,
    pub instances: Vec<Instance>,
}

impl Identity {
    /// One-variable identity: no clearing.
    pub fn plain(instances: Vec<Instance>) -> Self {
        Identity {
            scale: Rational::one(),
            clearing: Vec::new(),
            instances,
        }
    }

    pub fn cleared(scale: Rational, clearing: Vec<Rational>, instances: Vec<Instance>) -> Self {
        let mut clearing = clearing;
        clearing.sort();
        Identity {
            scale,
            clearing,
            instances,
        }
    }

    /// Human-readable clearing polynomial, e.g. `2(u-v)(u-v-1/2)`.
    pub fn clearing_label(&self) -> String {
        if self.clearing.is_empty() {
            return "1".to_string();
        }
        let mut s = if self.scale.is_one() {
            String::new()
        } else {
            self.scale.compact()
        };
        for c in &self.clearing {
            if c.is_zero() {
                s.push_str("(u-v)");
            } else if c.is_negative() {
                s.push_str(&format!("(u-v+{})", c.abs().compact()));
            } else {
                s.push_str(&format!("(u-v-{})", c.compact()));
            }
        }
        s
    }
}

/// Verdicts of the two comparison paths.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    /// `None` for one-variable identities.
    pub oracle: Option<Verdict>,
}

type DerivedKey = (String, Rational, bool);

/// Named operator series plus memoized shifts, inverses and products.
pub struct SeriesEnv {
    dim: usize,
    order: i64,
    base: HashMap<String, Series>,
    derived: Mutex<HashMap<DerivedKey, Arc<Series>>>,
    products: Mutex<HashMap<Vec<Factor>, Arc<BiSeries<OpMatrix>>>>,
}

impl SeriesEnv {
    pub fn new(dim: usize, order: i64) -> Self {
        SeriesEnv {
            dim,
            order,
            base: HashMap::new(),
            derived: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn insert(&mut self, key: impl Into<String>, s: Series) {
        self.base.insert(key.into(), s);
        self.derived.get_mut().expect("not poisoned").clear();
        self.products.get_mut().expect("not poisoned").clear();
    }

    pub fn get(&self, key: &str) -> Option<&Series> {
        self.base.get(key)
    }

    /// `key^{±1}(x + shift)`.
    pub fn resolve(&self, f: &Factor) -> Result<Arc<Series>> {
        let k = (f.key.clone(), f.shift.clone(), f.inverse);
        if let Some(s) = self.derived.lock().expect("not poisoned").get(&k) {
            return Ok(s.clone());
        }
        let base = self
            .base
            .get(&f.key)
            .ok_or_else(|| Error::UnknownSeries(f.key.clone()))?;
        let s = if f.inverse {
            base.invert()?
        } else {
            base.clone()
        };
        let s = if f.shift.is_zero() {
            s
        } else {
            s.shift(&f.shift)
        };
        let s = Arc::new(s);
        self.derived
            .lock()
            .expect("not poisoned")
            .insert(k, s.clone());
        Ok(s)
    }

    fn one_variable_product(&self, factors: &[Factor]) -> Result<Series> {
        let mut acc = Series::one(self.dim, self.order);
        for f in factors {
            acc = acc.try_mul(self.resolve(f)?.as_ref())?;
        }
        Ok(acc)
    }

    fn two_variable_product(&self, factors: &[Factor]) -> Result<Arc<BiSeries<OpMatrix>>> {
        if let Some(p) = self.products.lock().expect("not poisoned").get(factors) {
            return Ok(p.clone());
        }
        let mut acc = BiSeries::one(self.dim);
        for f in factors {
            let s = self.resolve(f)?;
            acc = match f.var {
                Var::U => acc.mul_right_u(&s)?,
                Var::V => acc.mul_right_v(&s)?,
            };
        }
        let acc = Arc::new(acc);
        self.products
            .lock()
            .expect("not poisoned")
            .insert(factors.to_vec(), acc.clone());
        Ok(acc)
    }

    /// Drop memoized two-variable products.
    pub fn clear_products(&self) {
        self.products.lock().expect("not poisoned").clear();
    }
}

fn multiset_minus(all: &[Rational], remove: &[Rational]) -> Option<Vec<Rational>> {
    let mut rest = all.to_vec();
    for c in remove {
        let pos = rest.iter().position(|x| x == c)?;
        rest.remove(pos);
    }
    Some(rest)
}

fn sum_groups(
    env: &SeriesEnv,
    side: &[Term],
    group_of: impl Fn(&Term) -> Result<Vec<Rational>>,
) -> Result<BTreeMap<Vec<Rational>, BiSeries<OpMatrix>>> {
    let mut groups: BTreeMap<Vec<Rational>, BiSeries<OpMatrix>> = BTreeMap::new();
    for t in side {
        if t.coeff.is_zero() {
            continue;
        }
        let p = env.two_variable_product(&t.factors)?.scale(&t.coeff);
        let g = group_of(t)?;
        let merged = match groups.remove(&g) {
            Some(acc) => acc.try_add(&p)?,
            None => p,
        };
        groups.insert(g, merged);
    }
    Ok(groups)
}

/// Side multiplied by `scale · Π (u-v-c)` over the clearing roots.
fn cleared_side(env: &SeriesEnv, id: &Identity, side: &[Term]) -> Result<BiSeries<OpMatrix>> {
    let groups = sum_groups(env, side, |t| {
        multiset_minus(&id.clearing, &t.denoms).ok_or_else(|| {
            Error::Config(format!(
                "term denominators {:?} not covered by the clearing polynomial",
                t.denoms
            ))
        })
    })?;
    let mut total = BiSeries::zero(env.dim);
    for (roots, mut s) in groups {
        for c in &roots {
            s = s.mul_linear(c)?;
        }
        total = total.try_add(&s)?;
    }
    Ok(total.scale(&id.scale))
}

/// Side with every `1/(u-v-c)` expanded as a geometric series in `u^{-1}`.
fn expanded_side(env: &SeriesEnv, side: &[Term]) -> Result<BiSeries<OpMatrix>> {
    let groups = sum_groups(env, side, |t| Ok(t.denoms.clone()))?;
    let mut total = BiSeries::zero(env.dim);
    for (roots, mut s) in groups {
        for c in &roots {
            s = s.div_linear(c, env.order + 1);
        }
        total = total.try_add(&s)?;
    }
    Ok(total)
}

fn bi_verdict(cmp: BiComparison<OpMatrix>, label: &str) -> Verdict {
    match cmp {
        BiComparison::Equal { checked } => Verdict::pass(checked),
        BiComparison::Differ { r, s, lhs, rhs } => {
            let (i, j) = lhs.first_difference(&rhs).expect("coefficients differ");
            Verdict::fail(Failure::new("").with_instance(label).at(r, Some(s)).entry(
                i,
                j,
                lhs.get(i, j).clone(),
                rhs.get(i, j).clone(),
            ))
        }
    }
}

fn engine_failure(label: &str, e: Error) -> Verdict {
    Verdict::fail(Failure::new(format!("evaluation error: {e}")).with_instance(label))
}

fn one_variable_side(env: &SeriesEnv, side: &[Term]) -> Result<Series> {
    let mut acc = Series::zero(env.dim, env.order);
    for t in side {
        if t.coeff.is_zero() {
            continue;
        }
        let p = env.one_variable_product(&t.factors)?.scale(&t.coeff);
        acc = acc.try_add(&p)?;
    }
    Ok(acc)
}

fn evaluate_instance(env: &SeriesEnv, id: &Identity, inst: &Instance) -> Outcome {
    if !inst.is_two_variable() {
        let verdict = match (
            one_variable_side(env, &inst.lhs),
            one_variable_side(env, &inst.rhs),
        ) {
            (Ok(l), Ok(r)) => match l.first_entry_difference(&r) {
                None => Verdict::pass((l.valid_order().min(r.valid_order()) + 1).max(0) as usize),
                Some((order, i, j)) => {
                    let (a, b) = (
                        l.coeff(order).expect("valid"),
                        r.coeff(order).expect("valid"),
                    );
                    Verdict::fail(
                        Failure::new("")
                            .with_instance(&inst.label)
                            .at(order, None)
                            .entry(i, j, a.get(i, j).clone(), b.get(i, j).clone()),
                    )
                }
            },
            (Err(e), _) | (_, Err(e)) => engine_failure(&inst.label, e),
        };
        return Outcome {
            verdict,
            oracle: None,
        };
    }
    let cleared = cleared_side(env, id, &inst.lhs)
        .and_then(|l| Ok((l, cleared_side(env, id, &inst.rhs)?)))
        .and_then(|(l, r)| Ok(l.compare(&r)?));
    let verdict = match cleared {
        Ok(cmp) => bi_verdict(cmp, &inst.label),
        Err(e) => engine_failure(&inst.label, e),
    };
    let expanded = expanded_side(env, &inst.lhs)
        .and_then(|l| Ok((l, expanded_side(env, &inst.rhs)?)))
        .and_then(|(l, r)| Ok(l.compare(&r)?));
    let oracle = match expanded {
        Ok(cmp) => bi_verdict(cmp, &inst.label),
        Err(e) => engine_failure(&inst.label, e),
    };
    Outcome {
        verdict,
        oracle: Some(oracle),
    }
}

/// Evaluate every instance (in parallel) and fold the verdicts in instance
/// order, so the first failing instance is reported deterministically.
pub fn evaluate(env: &SeriesEnv, id: &Identity) -> Outcome {
    let outcomes: Vec<Outcome> = id
        .instances
        .par_iter()
        .map(|inst| evaluate_instance(env, id, inst))
        .collect();
    let has_oracle = outcomes.iter().any(|o| o.oracle.is_some());
    let oracle = has_oracle.then(|| {
        Verdict::combine(
            outcomes
                .iter()
                .map(|o| o.oracle.clone().unwrap_or_else(|| o.verdict.clone())),
        )
    });
    Outcome {
        verdict: Verdict::combine(outcomes.into_iter().map(|o| o.verdict)),
        oracle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Rational {
        Rational::half()
    }

    /// `A(u) = 1 + a u^{-1}` with commuting diagonal `a`.
    fn env_with(keys: &[(&str, Vec<OpMatrix>)]) -> SeriesEnv {
        let mut env = SeriesEnv::new(2, 6);
        for (k, coeffs) in keys {
            let mut cs = coeffs.clone();
            cs.resize(7, OpMatrix::zeros(2));
            env.insert(*k, TruncSeries::from_coeffs(2, cs).unwrap());
        }
        env
    }

    fn m(rows: [[i64; 2]; 2]) -> OpMatrix {
        OpMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn difference_quotient_of_a_polynomial_current() {
        // X(u) = x u^{-1}: (X(u) - X(v))/(u - v) = -x u^{-1} v^{-1}
        let x = m([[0, 1], [0, 0]]);
        let env = env_with(&[
            ("X", vec![OpMatrix::zeros(2), x.clone()]),
            ("Y", vec![OpMatrix::zeros(2), x.scale(&-Rational::one())]),
        ]);
        let lhs = over_side(
            linear(&[
                (Rational::one(), Factor::u("X")),
                (-Rational::one(), Factor::v("X")),
            ]),
            &Rational::zero(),
        );
        let rhs = vec![Term::product(vec![Factor::u("Y"), Factor::v("I1")])];
        let mut env = env;
        let mut ones = vec![OpMatrix::zeros(2); 7];
        ones[1] = OpMatrix::identity(2);
        env.insert("I1", TruncSeries::from_coeffs(2, ones).unwrap());
        let id = Identity::cleared(
            Rational::one(),
            vec![Rational::zero()],
            vec![Instance::new("q", lhs, rhs)],
        );
        let out = evaluate(&env, &id);
        assert!(out.verdict.is_pass(), "{out:?}");
        assert!(out.oracle.unwrap().is_pass());
    }

    #[test]
    fn wrong_sign_fails_on_both_paths() {
        let x = m([[1, 2], [0, 3]]);
        let env = env_with(&[("X", vec![OpMatrix::identity(2), x])]);
        // [X(u), X(v)] = 0 holds; claim it equals (X(u) - X(v))/(u-v-1/2)
        let lhs = commutator(&[Factor::u("X")], &[Factor::v("X")]);
        let rhs = over_side(
            linear(&[
                (Rational::one(), Factor::u("X")),
                (-Rational::one(), Factor::v("X")),
            ]),
            &half(),
        );
        let id = Identity::cleared(
            Rational::one(),
            vec![half()],
            vec![Instance::new("bad", lhs.clone(), rhs)],
        );
        let out = evaluate(&env, &id);
        let f = out.verdict.failure().expect("fails").clone();
        assert_eq!(f.instance.as_deref(), Some("bad"));
        assert!(out.oracle.unwrap().is_fail());
        let ok = Identity::cleared(
            Rational::one(),
            vec![half()],
            vec![Instance::new("ok", lhs, Vec::new())],
        );
        assert!(evaluate(&env, &ok).verdict.is_pass());
    }

    #[test]
    fn one_variable_with_shift_and_inverse() {
        // A(u) = 1 - u^{-1}·I, so A^{-1}(u) = Σ u^{-r} and A(u+1) = u/(u+1)
        let env = env_with(&[(
            "A",
            vec![
                OpMatrix::identity(2),
                OpMatrix::identity(2).scale(&-Rational::one()),
            ],
        )]);
        // A^{-1}(u)·A(u) = 1
        let id = Identity::plain(vec![Instance::new(
            "inv",
            vec![Term::product(vec![Factor::u("A").inv(), Factor::u("A")])],
            vec![Term::scalar(Rational::one())],
        )]);
        assert!(evaluate(&env, &id).verdict.is_pass());
        // A(u+1)^{-1} = (u+1)/u = 1 + u^{-1}, not 1 + 2u^{-1}
        let bad = Identity::plain(vec![Instance::new(
            "shift",
            vec![Term::product(vec![Factor::u("A")
                .shifted(Rational::one())
                .inv()])],
            vec![
                Term::scalar(Rational::one()),
                Term::new(Rational::from_int(2), vec![Factor::u("I1")]),
            ],
        )]);
        let mut env = env;
        let mut ones = vec![OpMatrix::zeros(2); 7];
        ones[1] = OpMatrix::identity(2);
        env.insert("I1", TruncSeries::from_coeffs(2, ones).unwrap());
        let f = evaluate(&env, &bad)
            .verdict
            .failure()
            .cloned()
            .expect("fails");
        assert_eq!((f.r, f.row, f.col), (Some(1), Some(0), Some(0)));
        assert_eq!(
            (f.lhs.unwrap(), f.rhs.unwrap()),
            (Rational::one(), Rational::from_int(2))
        );
    }

    #[test]
    fn clearing_label_reads_naturally() {
        let id = Identity::cleared(
            Rational::from_int(2),
            vec![half(), Rational::zero()],
            Vec::new(),
        );
        assert_eq!(id.clearing_label(), "2(u-v)(u-v-1/2)");
        assert_eq!(
            Factor::v("k").inv().shifted(half()).to_string(),
            "k^-1(v+1/2)"
        );
    }
}
