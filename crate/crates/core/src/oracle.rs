//! Brute-force proper-equivalence search for small forms.
//!
//! Independent of the reduction theory in [`crate::forms`]: it only walks the
//! generators of `SL2(Z)` acting on coefficient triples, so it can be used to
//! cross-check the rho-cycle class count.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::forms::QuadForm;

/// Outcome of a bounded reachability search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `g` was reached from `f`.
    Equivalent,
    /// The whole orbit of `f` fit inside the bound and `g` was not in it.
    NotEquivalent,
    /// The bounded search finished without reaching `g`, but some neighbours
    /// were pruned, so equivalence through larger forms is not ruled out.
    /// Indefinite orbits are infinite, so in practice this is the negative answer.
    Inconclusive,
}

type Triple = (i128, i128, i128);

fn triple(f: &QuadForm) -> Result<Triple> {
    let conv = |x: &BigInt| x.to_i64().map(i128::from).ok_or(Error::OutOfRange("oracle coefficients exceed i64"));
    Ok((conv(f.a())?, conv(f.b())?, conv(f.c())?))
}

fn neighbours((a, b, c): Triple) -> [Triple; 3] {
    [(a, b + 2 * a, a + b + c), (a, b - 2 * a, a - b + c), (c, -b, a)]
}

struct Search {
    bound: i128,
    seen: BTreeSet<Triple>,
    pruned: bool,
}

impl Search {
    fn new(bound: i128) -> Self {
        Search { bound, seen: BTreeSet::new(), pruned: false }
    }

    fn fits(&self, (a, b, c): Triple) -> bool {
        a.abs() <= self.bound && b.abs() <= self.bound && c.abs() <= self.bound
    }

    // Breadth-first flood from `start`, calling `visit` on each new triple;
    // stops early when `visit` returns true.
    fn flood(&mut self, start: Triple, mut visit: impl FnMut(Triple) -> bool) -> bool {
        let mut queue = VecDeque::new();
        if self.seen.insert(start) && visit(start) {
            return true;
        }
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for nb in neighbours(cur) {
                if !self.fits(nb) {
                    self.pruned = true;
                    continue;
                }
                if self.seen.insert(nb) {
                    if visit(nb) {
                        return true;
                    }
                    queue.push_back(nb);
                }
            }
        }
        false
    }
}

fn bound_of(bound: &BigInt) -> Result<i128> {
    bound
        .to_i64()
        .filter(|b| *b >= 0)
        .map(i128::from)
        .ok_or(Error::OutOfRange("oracle bound must be a nonnegative i64"))
}

/// Searches for `g` in the `SL2(Z)` orbit of `f`, never leaving forms whose
/// coefficients all have absolute value at most `bound`.
pub fn equivalence_oracle(f: &QuadForm, g: &QuadForm, bound: &BigInt) -> Result<Verdict> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::DiscriminantMismatch);
    }
    let (tf, tg) = (triple(f)?, triple(g)?);
    if tf == tg {
        return Ok(Verdict::Equivalent);
    }
    let mut search = Search::new(bound_of(bound)?);
    if !search.fits(tf) {
        return Ok(Verdict::Inconclusive);
    }
    if search.flood(tf, |t| t == tg) {
        return Ok(Verdict::Equivalent);
    }
    Ok(if search.pruned { Verdict::Inconclusive } else { Verdict::NotEquivalent })
}

/// Groups `forms` by bounded reachability; returns one label per input form.
///
/// Forms sharing a label are proven equivalent. Distinct labels are only
/// evidence of inequivalence, exactly as with [`Verdict::Inconclusive`].
pub fn oracle_components(forms: &[QuadForm], bound: &BigInt) -> Result<Vec<usize>> {
    let bound = bound_of(bound)?;
    let triples: Vec<Triple> = forms.iter().map(triple).collect::<Result<_>>()?;
    let mut index: BTreeMap<Triple, usize> = BTreeMap::new();
    for (i, t) in triples.iter().enumerate() {
        index.insert(*t, i);
    }
    let mut labels: Vec<Option<usize>> = alloc::vec![None; forms.len()];
    let mut next_label = 0;
    let mut search = Search::new(bound);
    for i in 0..forms.len() {
        if labels[i].is_some() {
            continue;
        }
        let label = next_label;
        next_label += 1;
        labels[i] = Some(label);
        if !search.fits(triples[i]) {
            continue;
        }
        search.flood(triples[i], |t| {
            if let Some(&j) = index.get(&t) {
                labels[j] = Some(label);
            }
            false
        });
    }
    Ok(labels.into_iter().map(|l| l.expect("every form labelled")).collect())
}

/// Number of distinct components found by [`oracle_components`].
pub fn oracle_class_count(forms: &[QuadForm], bound: &BigInt) -> Result<usize> {
    let labels = oracle_components(forms, bound)?;
    Ok(labels.iter().max().map_or(0, |m| m + 1))
}
