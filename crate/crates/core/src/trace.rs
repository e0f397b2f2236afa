//! Reduction of words in the rank-2 free group to SL(2,C) trace polynomials.
//!
//! For a representation ρ into SL(2,C) write `X = tr ρ(x)`, `Y = tr ρ(y)` and
//! `Z = tr ρ(xy)`. Every `tr ρ(w)` is a polynomial in `ℤ[X, Y, Z]`, obtained
//! from
//!
//! * `tr(uv) = tr(u) tr(v) - tr(uv⁻¹)`,
//! * `tr(u⁻¹) = tr(u)` and invariance under conjugation,
//! * `tr(1) = 2`, `tr(g^k) = p_k(tr g)`.
//!
//! Words are canonicalized (cyclically reduced, then the least rotation of the
//! word or its inverse) and memoized on that canonical form. Each step pivots
//! on the final letter of a chosen rotation: first on a power `g^e` with
//! `|e| ≥ 2`, which shortens the word, otherwise on an inverse letter that
//! follows a positive one, which keeps the length and lowers the number of
//! inverse letters. Words with only positive letters and both generators are
//! `(xy)^k`, whose trace is `p_k(Z)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::families::trace_power_table;
use crate::poly::{MPoly, Var};
use crate::word::{cyclic_reduce, free_reduce, FreeWord, Generator, Letter};

/// A polynomial in `X = τ_x`, `Y = τ_y`, `Z = τ_{xy}`.
pub type TracePoly = MPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("m must be an odd integer greater than 1, got {0}")]
    NotOddM(u64),
}

/// Accepts odd `m > 1`.
pub fn check_odd_m(m: u64) -> Result<(), TraceError> {
    if m > 1 && m % 2 == 1 {
        Ok(())
    } else {
        Err(TraceError::NotOddM(m))
    }
}

fn var_of(g: Generator) -> Var {
    match g {
        Generator::X => Var::X,
        Generator::Y => Var::Y,
    }
}

/// Memoizing trace reducer. The cache lives inside the engine, so each
/// concurrent task should own its engine.
#[derive(Debug, Default, Clone)]
pub struct TraceEngine {
    cache: HashMap<Vec<Letter>, TracePoly>,
    powers: [Vec<MPoly>; 3],
}

impl TraceEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of canonical words currently memoized.
    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn trace(&mut self, w: &FreeWord) -> TracePoly {
        self.trace_letters(w.letters())
    }

    /// `p_k` in `v`, for `k ≥ 1`.
    fn power(&mut self, k: usize, v: Var) -> MPoly {
        let table = &mut self.powers[v.index()];
        if table.len() <= k {
            *table = trace_power_table(k.max(2 * table.len()), v);
        }
        table[k].clone()
    }

    fn trace_letters(&mut self, letters: &[Letter]) -> TracePoly {
        let word = cyclic_reduce(free_reduce(letters));
        if word.is_empty() {
            return MPoly::constant(2);
        }
        let key = canonical(&word);
        if let Some(t) = self.cache.get(&key) {
            return t.clone();
        }
        let t = self.expand(&key);
        self.cache.insert(key, t.clone());
        t
    }

    /// One pivot step on a canonical, cyclically reduced, nonempty word.
    fn expand(&mut self, word: &[Letter]) -> TracePoly {
        let n = word.len();
        let inverse_count = word.iter().filter(|l| l.inverse).count();
        let word: Vec<Letter> = if 2 * inverse_count > n {
            word.iter().rev().map(|l| l.inv()).collect()
        } else {
            word.to_vec()
        };

        let first_gen = word[0].generator;
        if word.iter().all(|l| l.generator == first_gen) {
            return self.power(n, var_of(first_gen));
        }

        // rotate to a syllable boundary
        let start = (0..n)
            .find(|&i| word[i].generator != word[(i + n - 1) % n].generator)
            .unwrap_or(0);
        let mut word = word;
        word.rotate_left(start);

        let syllables = syllable_ends(&word);
        let power_syllable = syllables
            .iter()
            .rev()
            .find(|(_, (_, len))| *len >= 2)
            .copied();
        if let Some((end, (letter, _))) = power_syllable {
            // ... U ℓ ℓ  ->  tr(Uℓ) tr(ℓ) - tr(U)
            word.rotate_left((end + 1) % n);
            debug_assert_eq!(word[n - 1], letter);
            let g = var_of(letter.generator);
            let a = self.trace_letters(&word[..n - 1]);
            let b = self.trace_letters(&word[..n - 2]);
            return &(&a * &MPoly::var(g)) - &b;
        }

        // all exponents are ±1, so the generators alternate
        let pivot = (0..n)
            .rev()
            .find(|&i| word[i].inverse && !word[(i + n - 1) % n].inverse);
        match pivot {
            Some(i) => {
                // U g⁻¹  ->  tr(U) tr(g) - tr(U g)
                word.rotate_left((i + 1) % n);
                let g = word[n - 1].generator;
                let a = self.trace_letters(&word[..n - 1]);
                word[n - 1] = word[n - 1].inv();
                let b = self.trace_letters(&word);
                &(&a * &MPoly::var(var_of(g))) - &b
            }
            None => self.power(n / 2, Var::Z),
        }
    }

    /// `(p0, p1, p2)` for `H_m = ⟨x, y | xyx…x = yxy…y⟩`, `m` odd: with
    /// `w = (xyx…x)(yxy…y)⁻¹`, `p0 = τ_w - 2`, `p1 = τ_{wx} - X`,
    /// `p2 = τ_{wy} - Y`.
    pub fn h_m_presentation(&mut self, m: u64) -> Result<Presentation, TraceError> {
        check_odd_m(m)?;
        let w = relator_word(m);
        let x = FreeWord::letter(Letter::X);
        let y = FreeWord::letter(Letter::Y);
        let p0 = &self.trace(&w) - &MPoly::constant(2);
        let p1 = &self.trace(&(&w * &x)) - &MPoly::var(Var::X);
        let p2 = &self.trace(&(&w * &y)) - &MPoly::var(Var::Y);
        Ok(Presentation { p0, p1, p2 })
    }

    /// `τ_{w_1}` and `τ_{w_2}` for `w_1 = (xy)^k`, `w_2 = (yx)^k y x⁻¹`,
    /// `k = (m-1)/2`.
    pub fn f_trace_parts(&mut self, m: u64) -> Result<(TracePoly, TracePoly), TraceError> {
        check_odd_m(m)?;
        let (w1, w2) = f_words(m);
        Ok((self.trace(&w1), self.trace(&w2)))
    }

    /// `f = τ_{w_2} - τ_{w_1}` in `X, Y, Z`.
    pub fn f_trace(&mut self, m: u64) -> Result<TracePoly, TraceError> {
        let (t1, t2) = self.f_trace_parts(m)?;
        Ok(&t2 - &t1)
    }
}

/// Ends of the cyclic syllables of a word that starts at a syllable boundary,
/// as `(index of last letter, (letter, length))`.
fn syllable_ends(word: &[Letter]) -> Vec<(usize, (Letter, usize))> {
    let mut out = Vec::new();
    let mut len = 0;
    for i in 0..word.len() {
        len += 1;
        if i + 1 == word.len() || word[i + 1] != word[i] {
            out.push((i, (word[i], len)));
            len = 0;
        }
    }
    out
}

/// Least rotation of the word or of its inverse.
fn canonical(word: &[Letter]) -> Vec<Letter> {
    let inv: Vec<Letter> = word.iter().rev().map(|l| l.inv()).collect();
    let mut best = word.to_vec();
    for w in [word, inv.as_slice()] {
        for k in 0..w.len() {
            let better = w[k..].iter().chain(&w[..k]).cmp(best.iter()).is_lt();
            if better {
                best = w[k..].iter().chain(&w[..k]).copied().collect();
            }
        }
    }
    best
}

/// Trace polynomial of a single word, with a fresh cache.
pub fn trace_poly(w: &FreeWord) -> TracePoly {
    TraceEngine::new().trace(w)
}

/// `(xyx…x)(yxy…y)⁻¹`, each factor of length `m`.
pub fn relator_word(m: u64) -> FreeWord {
    let m = m as usize;
    &FreeWord::alternating(Generator::X, m) * &FreeWord::alternating(Generator::Y, m).inverse()
}

/// `w_1 = (xy)^k` and `w_2 = (yx)^k y x⁻¹` with `k = (m-1)/2`.
pub fn f_words(m: u64) -> (FreeWord, FreeWord) {
    let k = ((m - 1) / 2) as i64;
    let xy = FreeWord::from_letters([Letter::X, Letter::Y]);
    let yx = FreeWord::from_letters([Letter::Y, Letter::X]);
    let w1 = xy.pow(k);
    let w2 = &yx.pow(k) * &FreeWord::from_letters([Letter::Y, Letter::X_INV]);
    (w1, w2)
}

/// The three defining polynomials of `X(H_m)` before elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub p0: TracePoly,
    pub p1: TracePoly,
    pub p2: TracePoly,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::trace_power_poly;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    fn v(var: Var) -> MPoly {
        MPoly::var(var)
    }

    #[test]
    fn base_cases() {
        assert_eq!(trace_poly(&w("")), MPoly::constant(2));
        assert_eq!(trace_poly(&w("x")), v(Var::X));
        assert_eq!(trace_poly(&w("Y")), v(Var::Y));
        assert_eq!(trace_poly(&w("xy")), v(Var::Z));
        assert_eq!(trace_poly(&w("yx")), v(Var::Z));
        assert_eq!(trace_poly(&w("YX")), v(Var::Z));
    }

    #[test]
    fn small_words() {
        let (x, y, z) = (v(Var::X), v(Var::Y), v(Var::Z));
        assert_eq!(trace_poly(&w("xY")), &(&x * &y) - &z);
        let commutator = &(&(&(&x * &x) + &(&y * &y)) + &(&z * &z))
            - &(&(&(&x * &y) * &z) + &MPoly::constant(2));
        assert_eq!(trace_poly(&w("xyXY")), commutator);
        assert_eq!(trace_poly(&w("(xy)^3")), trace_power_poly(3, Var::Z));
        assert_eq!(trace_poly(&w("xx")), trace_power_poly(2, Var::X));
    }

    #[test]
    fn powers_match_family() {
        let mut e = TraceEngine::new();
        for k in 1..=50i64 {
            assert_eq!(
                e.trace(&w("x").pow(k)),
                trace_power_poly(k as usize, Var::X)
            );
            assert_eq!(
                e.trace(&w("y").pow(-k)),
                trace_power_poly(k as usize, Var::Y)
            );
            assert_eq!(
                e.trace(&w("xy").pow(k)),
                trace_power_poly(k as usize, Var::Z)
            );
        }
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let word = w("xxYxyyX").cyclically_reduced();
        let c = canonical(word.letters());
        for k in 0..word.len() {
            assert_eq!(canonical(word.rotate(k).letters()), c);
            assert_eq!(canonical(word.rotate(k).inverse().letters()), c);
        }
    }

    #[test]
    fn presentation_m3() {
        let mut e = TraceEngine::new();
        let pres = e.h_m_presentation(3).unwrap();
        let (x, y) = (v(Var::X), v(Var::Y));
        assert_eq!(pres.p2, &x - &y);
        assert_eq!(&pres.p1 - &(&x * &pres.p0), &x - &y);
        let trivial = pres
            .p0
            .substitute(Var::X, &MPoly::constant(2))
            .substitute(Var::Y, &MPoly::constant(2))
            .substitute(Var::Z, &MPoly::constant(2));
        assert!(trivial.is_zero());
        assert_eq!(e.h_m_presentation(4), Err(TraceError::NotOddM(4)));
        assert_eq!(e.h_m_presentation(1), Err(TraceError::NotOddM(1)));
    }

    #[test]
    fn f_trace_small() {
        let mut e = TraceEngine::new();
        let (t1, _) = e.f_trace_parts(3).unwrap();
        assert_eq!(t1, v(Var::Z));
        let (t1, _) = e.f_trace_parts(5).unwrap();
        assert_eq!(t1, trace_power_poly(2, Var::Z));
        let f = e.f_trace(3).unwrap().substitute(Var::Y, &v(Var::X));
        let (x, z) = (v(Var::X), v(Var::Z));
        let x2 = &x * &x;
        let expected = &(&(&(&z * &x2) - &(&z * &z)) - &z) - &(&x2 - &MPoly::constant(2));
        assert_eq!(f, expected);
    }

    #[test]
    fn relator_shape() {
        assert_eq!(relator_word(3), w("xyxYXY"));
        let (w1, w2) = f_words(5);
        assert_eq!(w1, w("xyxy"));
        assert_eq!(w2, w("yxyxyX"));
    }
}
