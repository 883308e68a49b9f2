//! Buchberger's algorithm: reduced Gröbner bases, normal forms and
//! elimination ideals.
//!
//! The pair-selection strategy is the normal one (minimal lcm degree, ties
//! broken by the monomial order, then by indices), with the coprimality and
//! chain criteria applied, so runs are deterministic and the final reduced
//! basis is the canonical one for the ideal and order.

use std::cmp::Ordering;

use crate::error::{BudgetKind, Error, Result};
use crate::field::{Coeff, Field};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Term};

/// Resource limits for a single basis computation. Gröbner bases can blow up
/// doubly exponentially; exceeding a limit yields a structured error instead
/// of nontermination.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_spairs: u64,
    pub max_terms: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_spairs: 1_000_000,
            max_terms: 20_000_000,
        }
    }
}

/// A reduced Gröbner basis: monic generators, no term of any member divisible
/// by the leading monomial of another, sorted ascending by leading monomial.
/// For a fixed ideal and order this object is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    field: Field,
    vars: usize,
    gens: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_trivial_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Wrap a set already known to be a reduced basis (e.g. the elimination
    /// part of a reduced basis under a block order).
    pub(crate) fn from_reduced_parts(
        order: MonomialOrder,
        field: Field,
        vars: usize,
        gens: Vec<Polynomial>,
    ) -> Self {
        GroebnerBasis {
            order,
            field,
            vars,
            gens,
        }
    }
}

/// Working polynomial inside the engine: terms sorted descending under the
/// active order, leading term first.
#[derive(Debug, Clone)]
struct EPoly {
    terms: Vec<Term>,
}

impl EPoly {
    fn from_poly(p: &Polynomial, order: &MonomialOrder) -> Self {
        let mut terms = p.terms().to_vec();
        terms.sort_by(|a, b| order.cmp(&b.mono, &a.mono));
        EPoly { terms }
    }

    fn to_poly(&self, field: Field, vars: usize) -> Polynomial {
        Polynomial::from_terms(
            field,
            vars,
            self.terms
                .iter()
                .map(|t| (t.coeff.clone(), t.mono.clone()))
                .collect(),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lt(&self) -> &Term {
        &self.terms[0]
    }
}

struct Engine<'a> {
    field: Field,
    order: &'a MonomialOrder,
    budget: &'a Budget,
    spairs_used: u64,
    terms_held: u64,
}

impl<'a> Engine<'a> {
    fn new(field: Field, order: &'a MonomialOrder, budget: &'a Budget) -> Self {
        Engine {
            field,
            order,
            budget,
            spairs_used: 0,
            terms_held: 0,
        }
    }

    fn charge_terms(&mut self, n: usize) -> Result<()> {
        self.terms_held += n as u64;
        if self.terms_held > self.budget.max_terms {
            return Err(Error::BudgetExceeded {
                kind: BudgetKind::Terms,
                limit: self.budget.max_terms,
            });
        }
        Ok(())
    }

    fn charge_spair(&mut self) -> Result<()> {
        self.spairs_used += 1;
        if self.spairs_used > self.budget.max_spairs {
            return Err(Error::BudgetExceeded {
                kind: BudgetKind::SPairs,
                limit: self.budget.max_spairs,
            });
        }
        Ok(())
    }

    /// f - c * x^m * g, merging sorted term lists.
    fn sub_scaled(&self, f: &EPoly, c: &Coeff, m: &Monomial, g: &EPoly) -> EPoly {
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            let gm = g.terms[j].mono.mul(m);
            match self.order.cmp(&f.terms[i].mono, &gm) {
                Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let gc = self.field.neg(&self.field.mul(&g.terms[j].coeff, c));
                    out.push(Term {
                        coeff: gc,
                        mono: gm,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let gc = self.field.mul(&g.terms[j].coeff, c);
                    let nc = self.field.sub(&f.terms[i].coeff, &gc);
                    if !self.field.is_zero(&nc) {
                        out.push(Term {
                            coeff: nc,
                            mono: gm,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f.terms[i..]);
        while j < g.terms.len() {
            let gc = self.field.neg(&self.field.mul(&g.terms[j].coeff, c));
            out.push(Term {
                coeff: gc,
                mono: g.terms[j].mono.mul(m),
            });
            j += 1;
        }
        EPoly { terms: out }
    }

    /// Full normal form against `basis`: no term of the result is divisible
    /// by any leading monomial of the basis.
    fn reduce_full(&mut self, mut f: EPoly, basis: &[EPoly]) -> Result<EPoly> {
        let mut done: Vec<Term> = Vec::new();
        'outer: while !f.is_zero() {
            self.charge_terms(1)?;
            let t = f.lt().clone();
            for g in basis {
                if g.is_zero() {
                    continue;
                }
                let glt = g.lt();
                if let Some(q) = t.mono.div(&glt.mono) {
                    let c = self.field.div(&t.coeff, &glt.coeff);
                    f = self.sub_scaled(&f, &c, &q, g);
                    continue 'outer;
                }
            }
            // irreducible leading term: move it to the remainder
            done.push(t);
            f.terms.remove(0);
        }
        done.extend(f.terms);
        Ok(EPoly { terms: done })
    }

    fn spoly(&self, f: &EPoly, g: &EPoly) -> EPoly {
        let ft = f.lt();
        let gt = g.lt();
        let l = ft.mono.lcm(&gt.mono);
        let mf = l.div(&ft.mono).unwrap();
        let mg = l.div(&gt.mono).unwrap();
        let scaled_f = EPoly {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    coeff: self.field.div(&t.coeff, &ft.coeff),
                    mono: t.mono.mul(&mf),
                })
                .collect(),
        };
        let c = self.field.inv(&gt.coeff);
        self.sub_scaled(&scaled_f, &c, &mg, g)
    }
}

/// Compute the reduced Gröbner basis of the ideal generated by `gens`.
/// The ambient field is passed explicitly so the zero ideal is unambiguous.
pub fn groebner_basis(
    field: Field,
    gens: &[Polynomial],
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let vars = order.vars();
    for p in gens {
        assert_eq!(p.field(), field, "field mismatch");
        assert_eq!(p.vars(), vars, "variable count mismatch");
    }
    if gens.iter().all(|p| p.is_zero()) {
        return Ok(GroebnerBasis::from_reduced_parts(
            order.clone(),
            field,
            vars,
            Vec::new(),
        ));
    }

    let mut eng = Engine::new(field, order, budget);
    let mut basis: Vec<EPoly> = Vec::new();

    // seed with interreduced inputs
    for p in gens {
        if p.is_zero() {
            continue;
        }
        let e = EPoly::from_poly(p, order);
        let r = eng.reduce_full(e, &basis)?;
        if !r.is_zero() {
            basis.push(r);
        }
    }

    // pair queue, kept sorted so the minimum is at the back
    struct Pair {
        i: usize,
        j: usize,
        lcm: Monomial,
        deg: u32,
    }
    let mut queue: Vec<Pair> = Vec::new();
    let pair_less = |a: &Pair, b: &Pair, ord: &MonomialOrder| -> Ordering {
        a.deg
            .cmp(&b.deg)
            .then_with(|| ord.cmp(&a.lcm, &b.lcm))
            .then_with(|| a.i.cmp(&b.i))
            .then_with(|| a.j.cmp(&b.j))
    };
    let push_pairs = |queue: &mut Vec<Pair>, basis: &[EPoly], k: usize, ord: &MonomialOrder| {
        for i in 0..k {
            let lcm = basis[i].lt().mono.lcm(&basis[k].lt().mono);
            let deg = lcm.degree();
            let p = Pair { i, j: k, lcm, deg };
            let pos = queue
                .binary_search_by(|q| pair_less(&p, q, ord).then(Ordering::Less))
                .unwrap_or_else(|e| e);
            queue.insert(pos, p);
        }
    };

    for k in 0..basis.len() {
        push_pairs(&mut queue, &basis, k, order);
    }

    let mut processed: std::collections::HashSet<(usize, usize)> = Default::default();

    while let Some(pair) = queue.pop() {
        eng.charge_spair()?;
        processed.insert((pair.i, pair.j));
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        // coprimality criterion
        if fi.lt().mono.coprime(&fj.lt().mono) {
            continue;
        }
        // chain criterion: some k with lt(k) | lcm(i,j) and both pairs done
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == pair.i || k == pair.j {
                continue;
            }
            if g.lt().mono.divides(&pair.lcm) {
                let a = (k.min(pair.i), k.max(pair.i));
                let b = (k.min(pair.j), k.max(pair.j));
                if processed.contains(&a) && processed.contains(&b) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        let s = eng.spoly(fi, fj);
        let r = eng.reduce_full(s, &basis)?;
        if !r.is_zero() {
            basis.push(r);
            let k = basis.len() - 1;
            push_pairs(&mut queue, &basis, k, order);
        }
    }

    // minimalize: drop members whose leading monomial is divisible by another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            if basis[j].lt().mono.divides(&basis[i].lt().mono)
                && (basis[j].lt().mono != basis[i].lt().mono || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<EPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();

    // tail-reduce to the unique reduced basis
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let current = minimal[i].clone();
            let others: Vec<EPoly> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = eng.reduce_full(current, &others)?;
            if r.terms != minimal[i].terms {
                minimal[i] = r;
                changed = true;
            }
        }
        minimal.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }

    // monic, sorted ascending by leading monomial
    let mut out: Vec<Polynomial> = minimal
        .iter()
        .map(|e| {
            let lt = e.lt().coeff.clone();
            let inv = field.inv(&lt);
            let terms = e
                .terms
                .iter()
                .map(|t| (field.mul(&t.coeff, &inv), t.mono.clone()))
                .collect();
            Polynomial::from_terms(field, vars, terms)
        })
        .collect();
    out.sort_by(|a, b| {
        let la = a.leading(order).unwrap().mono.clone();
        let lb = b.leading(order).unwrap().mono.clone();
        order.cmp(&la, &lb)
    });

    Ok(GroebnerBasis {
        order: order.clone(),
        field,
        vars,
        gens: out,
    })
}

/// Remainder of `f` on division by the basis; zero iff `f` lies in the ideal.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    normal_form_budgeted(f, gb, &Budget::default()).expect("normal form within default budget")
}

pub fn normal_form_budgeted(
    f: &Polynomial,
    gb: &GroebnerBasis,
    budget: &Budget,
) -> Result<Polynomial> {
    assert_eq!(f.vars(), gb.vars, "variable count mismatch");
    assert_eq!(f.field(), gb.field, "field mismatch");
    let mut eng = Engine::new(gb.field, &gb.order, budget);
    let basis: Vec<EPoly> = gb
        .gens
        .iter()
        .map(|p| EPoly::from_poly(p, &gb.order))
        .collect();
    let r = eng.reduce_full(EPoly::from_poly(f, &gb.order), &basis)?;
    Ok(r.to_poly(gb.field, f.vars()))
}

/// Generators of `ideal ∩ k[back variables]`, re-indexed into the smaller
/// ambient; the result is itself a reduced basis for the back order.
pub fn elimination_ideal(
    field: Field,
    gens: &[Polynomial],
    order: &MonomialOrder,
    drop_front: usize,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    if !order.eliminates(drop_front) {
        return Err(Error::NotEliminationOrder { front: drop_front });
    }
    let gb = groebner_basis(field, gens, order, budget)?;
    let back = gb.vars() - drop_front;
    let idx_map: Vec<usize> = (0..back).collect();
    let mut kept: Vec<Polynomial> = gb
        .gens
        .iter()
        .filter(|p| p.avoids_front(drop_front))
        .map(|p| {
            // strip the (all-zero) front exponents
            Polynomial::from_terms(
                p.field(),
                back,
                p.terms()
                    .iter()
                    .map(|t| {
                        (
                            t.coeff.clone(),
                            Monomial(t.mono.0[drop_front..].to_vec()).map_vars(back, &idx_map),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    let back_order = MonomialOrder::degrevlex(back);
    kept.sort_by(|a, b| {
        let la = a.leading(&back_order).unwrap().mono.clone();
        let lb = b.leading(&back_order).unwrap().mono.clone();
        back_order.cmp(&la, &lb)
    });
    Ok(kept)
}

/// Reduced basis of the elimination ideal as a ready-made `GroebnerBasis`
/// in the back ambient under degrevlex.
pub fn elimination_basis(
    gens: &[Polynomial],
    field: Field,
    total_vars: usize,
    drop_front: usize,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let order = MonomialOrder::elimination(drop_front, total_vars - drop_front);
    let kept = elimination_ideal(field, gens, &order, drop_front, budget)?;
    Ok(GroebnerBasis::from_reduced_parts(
        MonomialOrder::degrevlex(total_vars - drop_front),
        field,
        total_vars - drop_front,
        kept,
    ))
}
