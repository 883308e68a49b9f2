//! Membership and kernel computations for spans with coefficients restricted
//! to a distinguished subring.
//!
//! Setting: a graph ring `k[x, w]` where the `x` block presents some ring and
//! the `w` block marks the images of a subring's generators (the graph ideal
//! contains `w_j - a_j(x)`). Given target vectors `V_1..V_Q` in a free module
//! over the graph ring, the engine answers two questions about the set of
//! tuples `(h_1(w), .., h_Q(w))` with `Σ h_q V_q` inside the ideal-span:
//!
//! * `relation_rows`: a generating set of all such tuples;
//! * `membership(W)`: whether `W ≡ Σ h_q V_q` for some such tuple, with the
//!   witness row.
//!
//! Both fall out of one reduced module Gröbner basis: each target is tagged
//! with a fresh unit position and the basis is computed under the stratified
//! order that ranks value positions above `x`-touching tag terms above
//! `w`-only tag terms. A basis element with zero value part and `w`-only tags
//! is a relation; a normal form with zero value part and `w`-only tags is a
//! membership witness.

use crate::error::Result;
use crate::field::Field;
use crate::groebner::{Budget, GroebnerBasis};
use crate::modules::{module_gb, module_normal_form, ModuleGB, ModuleOrder, ModuleVector};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

pub struct SpanEngine {
    field: Field,
    x_vars: usize,
    w_vars: usize,
    value_rank: usize,
    targets: usize,
    gb: ModuleGB,
    budget: Budget,
}

impl SpanEngine {
    /// `graph` is the reduced basis of the graph ideal in `k[x, w]` (front
    /// block `x`, back block `w`); `targets` live in a rank-`value_rank`
    /// free module over the same ambient.
    pub fn new(
        graph: &GroebnerBasis,
        x_vars: usize,
        targets: &[ModuleVector],
        budget: &Budget,
    ) -> Result<SpanEngine> {
        let field = graph.field();
        let total = graph.vars();
        let w_vars = total - x_vars;
        assert!(!targets.is_empty(), "at least one target required");
        let value_rank = targets[0].rank();
        for t in targets {
            assert_eq!(t.rank(), value_rank, "target rank mismatch");
            assert_eq!(t.vars(), total, "target ambient mismatch");
        }
        let q = targets.len();
        let rank = value_rank + q;
        let order = ModuleOrder::Strata {
            value_positions: value_rank,
            front_vars: x_vars,
        };
        let mut rows: Vec<ModuleVector> = Vec::new();
        for (idx, t) in targets.iter().enumerate() {
            let mut comps = t.components().to_vec();
            for k in 0..q {
                comps.push(if k == idx {
                    Polynomial::one(field, total).neg()
                } else {
                    Polynomial::zero(field, total)
                });
            }
            rows.push(ModuleVector::new(comps));
        }
        for g in graph.generators() {
            for c in 0..value_rank {
                let mut comps = vec![Polynomial::zero(field, total); rank];
                comps[c] = g.clone();
                rows.push(ModuleVector::new(comps));
            }
        }
        let gb = module_gb(&rows, &order, budget)?;
        Ok(SpanEngine {
            field,
            x_vars,
            w_vars,
            value_rank,
            targets: q,
            gb,
            budget: *budget,
        })
    }

    fn strip_to_w(&self, p: &Polynomial) -> Option<Polynomial> {
        if !p.avoids_front(self.x_vars) {
            return None;
        }
        Some(Polynomial::from_terms(
            self.field,
            self.w_vars,
            p.terms()
                .iter()
                .map(|t| {
                    (
                        t.coeff.clone(),
                        Monomial(t.mono.0[self.x_vars..].to_vec()),
                    )
                })
                .collect(),
        ))
    }

    /// Generating rows `(h_1(w), .., h_Q(w))` of the coefficient-restricted
    /// kernel, as polynomials in the `w` ambient.
    pub fn relation_rows(&self) -> Vec<Vec<Polynomial>> {
        let mut rows = Vec::new();
        'outer: for g in self.gb.generators() {
            let (value, tags) = g.components().split_at(self.value_rank);
            if value.iter().any(|p| !p.is_zero()) {
                continue;
            }
            let mut row = Vec::with_capacity(self.targets);
            for t in tags {
                match self.strip_to_w(&t.neg()) {
                    Some(h) => row.push(h),
                    None => continue 'outer,
                }
            }
            rows.push(row);
        }
        rows
    }

    /// Witness coefficients expressing `w_vec` over the targets modulo the
    /// graph ideal, when they exist.
    pub fn membership(&self, value: &ModuleVector) -> Result<Option<Vec<Polynomial>>> {
        assert_eq!(value.rank(), self.value_rank, "value rank mismatch");
        let total = self.x_vars + self.w_vars;
        let mut comps = value.components().to_vec();
        for _ in 0..self.targets {
            comps.push(Polynomial::zero(self.field, total));
        }
        let nf = module_normal_form(&ModuleVector::new(comps), &self.gb, &self.budget)?;
        let (v, tags) = nf.components().split_at(self.value_rank);
        if v.iter().any(|p| !p.is_zero()) {
            return Ok(None);
        }
        // v ≡ (0; tags) mod the row module, so the tags themselves are the
        // coefficients (the generating rows carry negated tags)
        let mut row = Vec::with_capacity(self.targets);
        for t in tags {
            match self.strip_to_w(t) {
                Some(h) => row.push(h),
                None => return Ok(None),
            }
        }
        Ok(Some(row))
    }

    /// Embed a `w`-ambient polynomial into the graph ambient.
    pub fn embed_w(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.w_vars).map(|i| self.x_vars + i).collect();
        p.map_vars(self.x_vars + self.w_vars, &map)
    }
}
