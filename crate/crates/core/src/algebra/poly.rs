//! Polynomials in two abstract boson modes with exact coefficients.
//!
//! Symbols obey `[b_i, b_j^+] = delta_ij` with every other commutator zero.
//! Nothing here refers to a truncated space, so results are free of
//! boundary effects.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{q_int, QComplex, UnitScalar};
use crate::error::{BatemanError, Result};
use crate::spectrum::{Mode, OpKind};

/// Abstract ladder symbol. The derived order (creators first, mode 1 first)
/// is the canonical order of normal-ordered words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    B1Dag,
    B2Dag,
    B1,
    B2,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::B1Dag, Symbol::B2Dag, Symbol::B1, Symbol::B2];

    pub fn is_creator(self) -> bool {
        matches!(self, Symbol::B1Dag | Symbol::B2Dag)
    }

    /// Mode index, 0 or 1.
    pub fn mode(self) -> usize {
        match self {
            Symbol::B1 | Symbol::B1Dag => 0,
            Symbol::B2 | Symbol::B2Dag => 1,
        }
    }

    pub fn from_parts(mode: Mode, kind: OpKind) -> Self {
        match (mode, kind) {
            (Mode::One, OpKind::Annihilation) => Symbol::B1,
            (Mode::One, OpKind::Creation) => Symbol::B1Dag,
            (Mode::Two, OpKind::Annihilation) => Symbol::B2,
            (Mode::Two, OpKind::Creation) => Symbol::B2Dag,
        }
    }

    /// Swaps annihilator and creator of the same mode.
    pub fn partner(self) -> Self {
        match self {
            Symbol::B1 => Symbol::B1Dag,
            Symbol::B1Dag => Symbol::B1,
            Symbol::B2 => Symbol::B2Dag,
            Symbol::B2Dag => Symbol::B2,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::B1 => "b1",
            Symbol::B2 => "b2",
            Symbol::B1Dag => "b1+",
            Symbol::B2Dag => "b2+",
        })
    }
}

/// Ordered product of symbols. Words compare by length first, then lexically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn from_monomial(m: &Monomial) -> Self {
        let mut w = Vec::with_capacity(m.degree());
        w.extend(std::iter::repeat(Symbol::B1Dag).take(m.cre[0] as usize));
        w.extend(std::iter::repeat(Symbol::B2Dag).take(m.cre[1] as usize));
        w.extend(std::iter::repeat(Symbol::B1).take(m.ann[0] as usize));
        w.extend(std::iter::repeat(Symbol::B2).take(m.ann[1] as usize));
        Self(w)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.0.windows(2).all(|p| p[0] <= p[1])
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A word with its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderWord {
    pub coeff: UnitScalar,
    pub word: Word,
}

impl LadderWord {
    pub fn new(coeff: UnitScalar, symbols: &[Symbol]) -> Self {
        Self {
            coeff,
            word: Word(symbols.to_vec()),
        }
    }
}

/// `b1^+^c1 b2^+^c2 b1^a1 b2^a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Monomial {
    cre: [u32; 2],
    ann: [u32; 2],
}

impl Monomial {
    const UNIT: Monomial = Monomial {
        cre: [0, 0],
        ann: [0, 0],
    };

    fn degree(&self) -> usize {
        (self.cre[0] + self.cre[1] + self.ann[0] + self.ann[1]) as usize
    }
}

/// Finite sum of words. Terms with zero coefficient are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LadderPoly {
    terms: BTreeMap<Word, UnitScalar>,
}

impl LadderPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(UnitScalar::one())
    }

    pub fn constant(c: UnitScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(Word::empty(), c);
        p
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::word(&[s])
    }

    /// A single word with unit coefficient.
    pub fn word(symbols: &[Symbol]) -> Self {
        let mut p = Self::zero();
        p.add_term(Word(symbols.to_vec()), UnitScalar::one());
        p
    }

    /// Linear combination of symbols with plain coefficients.
    pub fn linear(terms: &[(QComplex, Symbol)]) -> Self {
        let mut p = Self::zero();
        for (c, s) in terms {
            p.add_term(Word(vec![*s]), UnitScalar::plain(c.clone()));
        }
        p
    }

    pub fn from_words(words: impl IntoIterator<Item = LadderWord>) -> Self {
        let mut p = Self::zero();
        for w in words {
            p.add_term(w.word, w.coeff);
        }
        p
    }

    pub fn add_term(&mut self, word: Word, coeff: UnitScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing = &*existing + &coeff;
                if existing.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &UnitScalar)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = LadderWord> + '_ {
        self.terms.iter().map(|(w, c)| LadderWord {
            coeff: c.clone(),
            word: w.clone(),
        })
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, symbols: &[Symbol]) -> UnitScalar {
        self.terms
            .get(&Word(symbols.to_vec()))
            .cloned()
            .unwrap_or_else(UnitScalar::zero)
    }

    /// Coefficient of the empty word.
    pub fn constant_term(&self) -> UnitScalar {
        self.coefficient(&[])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q_int(-1)))
    }

    pub fn scale(&self, factor: &QComplex) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.scale(factor));
        }
        out
    }

    /// Multiplies every coefficient by a unit-tagged scalar.
    pub fn try_scale(&self, factor: &UnitScalar) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.try_mul(factor)?);
        }
        Ok(out)
    }

    /// Concatenation product (not normal ordered).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.0.clone();
                w.extend_from_slice(&wb.0);
                out.add_term(Word(w), ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, n: u32) -> Result<Self> {
        (0..n).try_fold(Self::one(), |acc, _| acc.try_mul(self))
    }

    /// Symbol-level conjugation: reverses each word, swaps annihilators with
    /// creators and conjugates coefficients (`i -> -i`, `gamma -> -gamma`).
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let word = Word(w.0.iter().rev().map(|s| s.partner()).collect());
            out.add_term(word, c.conj());
        }
        out
    }

    /// Replaces every symbol with a polynomial. See [`Substitution`].
    pub fn substitute(&self, sub: &Substitution) -> Result<Self> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let d = w.degree();
            if d % 2 == 1 && sub.scale_sq != q_int(1) {
                return Err(BatemanError::IrrationalScale(d));
            }
            let mut term = Self::constant(c.clone());
            for s in &w.0 {
                term = term.try_mul(&sub.images[*s as usize])?;
            }
            let mut factor = q_int(1);
            for _ in 0..d / 2 {
                factor = &factor * &sub.scale_sq;
            }
            out = out.add(&term.scale(&factor));
        }
        Ok(out)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(Word::is_normal_ordered)
    }
}

impl fmt::Display for LadderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) {w}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Symbol images `images[s as usize]` with a common factor `sqrt(scale_sq)`
/// pulled out of every image. Only words of even degree can be substituted
/// when the factor is irrational.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    pub images: [LadderPoly; 4],
    pub scale_sq: QComplex,
}

impl Substitution {
    pub fn new(image: impl Fn(Symbol) -> LadderPoly, scale_sq: QComplex) -> Self {
        Self {
            images: Symbol::ALL.map(image),
            scale_sq,
        }
    }
}

/// Normal-ordered canonical form: creators left of annihilators, mode 1
/// before mode 2 within each group.
pub fn normal_order(p: &LadderPoly) -> LadderPoly {
    let mut acc: BTreeMap<Monomial, UnitScalar> = BTreeMap::new();
    for (w, c) in p.terms() {
        for (m, k) in order_word(&w.0) {
            let coeff = c.scale(&q_int(k));
            let slot = acc.entry(m).or_insert_with(UnitScalar::zero);
            *slot = &*slot + &coeff;
        }
    }
    let mut out = LadderPoly::zero();
    for (m, c) in acc {
        out.add_term(Word::from_monomial(&m), c);
    }
    out
}

/// Expands a word into normal-ordered monomials with integer weights by
/// right-multiplying one symbol at a time.
fn order_word(word: &[Symbol]) -> BTreeMap<Monomial, i64> {
    let mut cur: BTreeMap<Monomial, i64> = BTreeMap::from([(Monomial::UNIT, 1)]);
    for &s in word {
        let j = s.mode();
        let mut next = BTreeMap::new();
        for (m, k) in cur {
            if s.is_creator() {
                // b^a b^+ = b^+ b^a + a b^(a-1)
                let mut raised = m;
                raised.cre[j] += 1;
                *next.entry(raised).or_insert(0) += k;
                if m.ann[j] > 0 {
                    let mut lowered = m;
                    lowered.ann[j] -= 1;
                    *next.entry(lowered).or_insert(0) += k * i64::from(m.ann[j]);
                }
            } else {
                let mut grown = m;
                grown.ann[j] += 1;
                *next.entry(grown).or_insert(0) += k;
            }
        }
        next.retain(|_, k| *k != 0);
        cur = next;
    }
    cur
}

/// `<vac| bra ket |vac>` with `b_i |vac> = 0`, `<vac| b_i^+ = 0`, `<vac|vac> = 1`.
pub fn vacuum_pairing(bra: &LadderPoly, ket: &LadderPoly) -> Result<UnitScalar> {
    Ok(normal_order(&bra.try_mul(ket)?).constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q_frac, q_gauss, Unit};
    use Symbol::*;

    #[test]
    fn single_commutation() {
        let p = normal_order(&LadderPoly::word(&[B1, B1Dag]));
        let expected = LadderPoly::word(&[B1Dag, B1]).add(&LadderPoly::one());
        assert_eq!(p, expected);
    }

    #[test]
    fn distinct_modes_commute() {
        let p = normal_order(&LadderPoly::word(&[B1, B2Dag]));
        assert_eq!(p, LadderPoly::word(&[B2Dag, B1]));
    }

    #[test]
    fn double_commutation() {
        let p = normal_order(&LadderPoly::word(&[B1, B1, B1Dag, B1Dag]));
        let expected = LadderPoly::word(&[B1Dag, B1Dag, B1, B1])
            .add(&LadderPoly::word(&[B1Dag, B1]).scale(&q_int(4)))
            .add(&LadderPoly::one().scale(&q_int(2)));
        assert_eq!(p, expected);
    }

    #[test]
    fn normal_order_is_idempotent_and_canonical() {
        let p = LadderPoly::word(&[B2, B1Dag, B2Dag, B1])
            .add(&LadderPoly::word(&[B1, B2Dag]).scale(&q_gauss(0, 3)));
        let n = normal_order(&p);
        assert!(n.is_normal_ordered());
        assert_eq!(normal_order(&n), n);
    }

    #[test]
    fn pairing_examples() {
        let one = LadderPoly::one();
        assert_eq!(vacuum_pairing(&one, &one).unwrap(), UnitScalar::one());
        let v = vacuum_pairing(&LadderPoly::symbol(B1), &LadderPoly::symbol(B1Dag)).unwrap();
        assert_eq!(v, UnitScalar::one());
        let v = vacuum_pairing(
            &LadderPoly::word(&[B1, B1, B2]),
            &LadderPoly::word(&[B1Dag, B1Dag, B2Dag]),
        )
        .unwrap();
        assert_eq!(v, UnitScalar::plain(q_int(2)));
    }

    #[test]
    fn conjugation_is_an_involution() {
        let p = LadderPoly::word(&[B1, B2Dag, B2])
            .scale(&q_gauss(1, -2))
            .add(&LadderPoly::constant(UnitScalar::tagged(
                q_int(3),
                Unit::IHbarLambda,
            )));
        let c = p.conjugate();
        assert_eq!(
            c.coefficient(&[B2Dag, B2, B1Dag]),
            UnitScalar::plain(q_gauss(1, 2))
        );
        assert_eq!(c.conjugate(), p);
    }

    #[test]
    fn substitution_with_common_factor() {
        // b1 -> (b1 + b2)/sqrt2, b1^+ -> (b1^+ + b2^+)/sqrt2
        let one = q_int(1);
        let sub = Substitution::new(
            |s| match s {
                B1Dag => LadderPoly::linear(&[(one.clone(), B1Dag), (one.clone(), B2Dag)]),
                B1 => LadderPoly::linear(&[(one.clone(), B1), (one.clone(), B2)]),
                other => LadderPoly::symbol(other),
            },
            q_frac(1, 2),
        );
        let n = LadderPoly::word(&[B1Dag, B1]).substitute(&sub).unwrap();
        let half = q_frac(1, 2);
        assert_eq!(n.coefficient(&[B1Dag, B2]), UnitScalar::plain(half.clone()));
        assert_eq!(n.len(), 4);
        assert!(matches!(
            LadderPoly::symbol(B1).substitute(&sub),
            Err(BatemanError::IrrationalScale(1))
        ));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = LadderPoly::symbol(B1).sub(&LadderPoly::symbol(B1));
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }
}
