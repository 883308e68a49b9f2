//! Canonical-form multivariate polynomials over an exact field.
//!
//! Terms are kept strictly sorted (descending) under the graded reverse
//! lexicographic order of the ambient, with no zero coefficients and no
//! duplicate monomials, so structural equality is equality of canonical
//! forms. Order-sensitive operations (leading terms under a chosen order)
//! take the order explicitly.

use std::cmp::Ordering;

use crate::field::{Coeff, Field};
use crate::monomial::{degrevlex_cmp, Monomial, MonomialOrder};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: Coeff,
    pub mono: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    field: Field,
    vars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(field: Field, vars: usize) -> Self {
        Polynomial {
            field,
            vars,
            terms: Vec::new(),
        }
    }

    pub fn one(field: Field, vars: usize) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn constant(field: Field, vars: usize, c: Coeff) -> Self {
        if field.is_zero(&c) {
            return Self::zero(field, vars);
        }
        Polynomial {
            field,
            vars,
            terms: vec![Term {
                coeff: c,
                mono: Monomial::one(vars),
            }],
        }
    }

    pub fn variable(field: Field, vars: usize, index: usize) -> Self {
        assert!(index < vars, "variable index out of range");
        Polynomial {
            field,
            vars,
            terms: vec![Term {
                coeff: field.one(),
                mono: Monomial::var(vars, index),
            }],
        }
    }

    /// Normalizing constructor: combines duplicates, drops zeros, sorts.
    pub fn from_terms(field: Field, vars: usize, terms: Vec<(Coeff, Monomial)>) -> Self {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(coeff, mono)| {
                assert_eq!(mono.len(), vars, "monomial arity mismatch");
                Term { coeff, mono }
            })
            .collect();
        terms.sort_by(|a, b| degrevlex_cmp(&b.mono.0, &a.mono.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => {
                    last.coeff = field.add(&last.coeff, &t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !field.is_zero(&t.coeff));
        Polynomial {
            field,
            vars,
            terms: out,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].mono.is_one()
            && self.field.is_one(&self.terms[0].coeff)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }

    fn assert_same_ambient(&self, other: &Polynomial) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.vars, other.vars, "variable count mismatch");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ambient(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let a = &self.terms[i];
            let b = &other.terms[j];
            match degrevlex_cmp(&a.mono.0, &b.mono.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.field.add(&a.coeff, &b.coeff);
                    if !self.field.is_zero(&c) {
                        out.push(Term {
                            coeff: c,
                            mono: a.mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial {
            field: self.field,
            vars: self.vars,
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            field: self.field,
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: self.field.neg(&t.coeff),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, c: &Coeff, m: &Monomial) -> Polynomial {
        if self.field.is_zero(c) {
            return Polynomial::zero(self.field, self.vars);
        }
        Polynomial {
            field: self.field,
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: self.field.mul(&t.coeff, c),
                    mono: t.mono.mul(m),
                })
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Coeff) -> Polynomial {
        self.mul_term(c, &Monomial::one(self.vars))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ambient(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.field, self.vars);
        }
        // accumulate into a map keyed by monomial, then renormalize
        let mut acc: std::collections::BTreeMap<Monomial, Coeff> = std::collections::BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let m = a.mono.mul(&b.mono);
                let c = self.field.mul(&a.coeff, &b.coeff);
                match acc.get_mut(&m) {
                    Some(existing) => *existing = self.field.add(existing, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial::from_terms(
            self.field,
            self.vars,
            acc.into_iter().map(|(m, c)| (c, m)).collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field, self.vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term under the given order.
    pub fn leading(&self, order: &MonomialOrder) -> Option<&Term> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.mono, &b.mono))
    }

    /// Scale so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading(order) {
            None => self.clone(),
            Some(lt) => {
                let inv = self.field.inv(&lt.coeff);
                self.scaled(&inv)
            }
        }
    }

    /// Substitute `images[i]` for variable `i`. All images must share one
    /// ambient, which becomes the ambient of the result.
    pub fn substitute(&self, images: &[Polynomial], target_field: Field, target_vars: usize) -> Polynomial {
        assert_eq!(images.len(), self.vars, "one image per variable required");
        for im in images {
            assert_eq!(im.field(), target_field);
            assert_eq!(im.vars(), target_vars);
        }
        // cache powers of each image up to the maximum exponent used
        let mut max_exp = vec![0u32; self.vars];
        for t in &self.terms {
            for (i, &e) in t.mono.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(self.vars);
        for (i, im) in images.iter().enumerate() {
            let mut tower = vec![Polynomial::one(target_field, target_vars)];
            for e in 1..=max_exp[i] {
                let next = tower[(e - 1) as usize].mul(im);
                tower.push(next);
            }
            powers.push(tower);
        }
        let mut acc = Polynomial::zero(target_field, target_vars);
        for t in &self.terms {
            let mut prod = Polynomial::constant(target_field, target_vars, convert_coeff(self.field, target_field, &t.coeff));
            for (i, &e) in t.mono.0.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&prod);
        }
        acc
    }

    /// Move the polynomial into a larger (or permuted) ambient, sending
    /// variable `i` to `idx_map[i]`.
    pub fn map_vars(&self, new_vars: usize, idx_map: &[usize]) -> Polynomial {
        assert_eq!(idx_map.len(), self.vars);
        Polynomial::from_terms(
            self.field,
            new_vars,
            self.terms
                .iter()
                .map(|t| (t.coeff.clone(), t.mono.map_vars(new_vars, idx_map)))
                .collect(),
        )
    }

    /// True when no variable with index < `front` occurs.
    pub fn avoids_front(&self, front: usize) -> bool {
        self.terms
            .iter()
            .all(|t| t.mono.0[..front].iter().all(|&e| e == 0))
    }

    /// Render with the ambient's variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

/// Coefficients move between identical fields only; this is a checked copy.
fn convert_coeff(from: Field, to: Field, c: &Coeff) -> Coeff {
    assert_eq!(from, to, "cannot move coefficients between fields");
    c.clone()
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl std::fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        assert_eq!(self.names.len(), p.vars(), "name list arity mismatch");
        let field = p.field();
        for (k, t) in p.terms().iter().enumerate() {
            let neg = field.is_display_negative(&t.coeff);
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let c = field.display_abs(&t.coeff);
            let coeff_is_one = field.is_one(&c);
            let mut wrote_factor = false;
            if !coeff_is_one || t.mono.is_one() {
                write!(f, "{}", field.format(&c))?;
                wrote_factor = true;
            }
            for (i, &e) in t.mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.names[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}
