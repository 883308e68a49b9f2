//! Gröbner bases for submodules of finite free modules, membership tests and
//! syzygies.
//!
//! Module terms are pairs (position, monomial). Besides the standard
//! term-over-position and position-over-term orders there are two elimination
//! flavors used by the higher layers: block elimination of value positions
//! (for syzygies) and the stratified order of [`crate::span`] which also
//! eliminates a front variable block inside the tag positions.

use std::cmp::Ordering;

use crate::error::{BudgetKind, Error, Result};
use crate::field::{Coeff, Field};
use crate::monomial::{degrevlex_cmp, Monomial, MonomialOrder};
use crate::poly::Polynomial;

/// Element of a finite free module over the polynomial ambient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleVector {
    comps: Vec<Polynomial>,
}

impl ModuleVector {
    pub fn new(comps: Vec<Polynomial>) -> Self {
        assert!(!comps.is_empty(), "module rank must be positive");
        let (f, v) = (comps[0].field(), comps[0].vars());
        for c in &comps {
            assert_eq!(c.field(), f, "field mismatch");
            assert_eq!(c.vars(), v, "variable count mismatch");
        }
        ModuleVector { comps }
    }

    pub fn zero(field: Field, vars: usize, rank: usize) -> Self {
        ModuleVector {
            comps: vec![Polynomial::zero(field, vars); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn field(&self) -> Field {
        self.comps[0].field()
    }

    pub fn vars(&self) -> usize {
        self.comps[0].vars()
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        ModuleVector {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> ModuleVector {
        ModuleVector {
            comps: self.comps.iter().map(|c| c.mul(p)).collect(),
        }
    }
}

/// Order on module terms (position, monomial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Term over position: monomials compared first, lower position wins ties.
    Top { order: MonomialOrder },
    /// Position over term: lower position dominates.
    Pot { order: MonomialOrder },
    /// The first `value_positions` positions dominate everything else;
    /// within each block, `inner` applies. Used to read off syzygies.
    Elim {
        value_positions: usize,
        inner: Box<ModuleOrder>,
    },
    /// Three strata: value positions, then tag terms touching the first
    /// `front_vars` variables, then tag terms in the remaining variables
    /// only. Within strata: front part degrevlex, back part degrevlex,
    /// lower position wins. Coefficient-restricted kernels fall out of
    /// bases for this order.
    Strata {
        value_positions: usize,
        front_vars: usize,
    },
}

impl ModuleOrder {
    pub fn top_degrevlex(vars: usize) -> Self {
        ModuleOrder::Top {
            order: MonomialOrder::degrevlex(vars),
        }
    }

    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        match self {
            ModuleOrder::Top { order } => order
                .cmp(a.1, b.1)
                .then_with(|| b.0.cmp(&a.0)),
            ModuleOrder::Pot { order } => b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1)),
            ModuleOrder::Elim {
                value_positions,
                inner,
            } => {
                let av = a.0 < *value_positions;
                let bv = b.0 < *value_positions;
                match (av, bv) {
                    (true, false) => Ordering::Greater,
                    (false, true) => Ordering::Less,
                    _ => inner.cmp(a, b),
                }
            }
            ModuleOrder::Strata {
                value_positions,
                front_vars,
            } => {
                let class = |p: usize, m: &Monomial| -> u8 {
                    if p < *value_positions {
                        2
                    } else if m.0[..*front_vars].iter().any(|&e| e > 0) {
                        1
                    } else {
                        0
                    }
                };
                class(a.0, a.1)
                    .cmp(&class(b.0, b.1))
                    .then_with(|| degrevlex_cmp(&a.1 .0[..*front_vars], &b.1 .0[..*front_vars]))
                    .then_with(|| degrevlex_cmp(&a.1 .0[*front_vars..], &b.1 .0[*front_vars..]))
                    .then_with(|| b.0.cmp(&a.0))
            }
        }
    }
}

#[derive(Debug, Clone)]
struct MTerm {
    coeff: Coeff,
    pos: usize,
    mono: Monomial,
}

/// Engine representation: terms sorted descending under the module order.
#[derive(Debug, Clone)]
struct MPoly {
    terms: Vec<MTerm>,
}

impl MPoly {
    fn from_vector(v: &ModuleVector, order: &ModuleOrder) -> Self {
        let mut terms: Vec<MTerm> = Vec::new();
        for (pos, comp) in v.components().iter().enumerate() {
            for t in comp.terms() {
                terms.push(MTerm {
                    coeff: t.coeff.clone(),
                    pos,
                    mono: t.mono.clone(),
                });
            }
        }
        terms.sort_by(|a, b| order.cmp((b.pos, &b.mono), (a.pos, &a.mono)));
        MPoly { terms }
    }

    fn to_vector(&self, field: Field, vars: usize, rank: usize) -> ModuleVector {
        let mut comps: Vec<Vec<(Coeff, Monomial)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            comps[t.pos].push((t.coeff.clone(), t.mono.clone()));
        }
        ModuleVector::new(
            comps
                .into_iter()
                .map(|ts| Polynomial::from_terms(field, vars, ts))
                .collect(),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lt(&self) -> &MTerm {
        &self.terms[0]
    }
}

/// Reduced Gröbner basis of a submodule of a free module.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleGB {
    order: ModuleOrder,
    field: Field,
    vars: usize,
    rank: usize,
    gens: Vec<ModuleVector>,
}

impl ModuleGB {
    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn generators(&self) -> &[ModuleVector] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

struct MEngine<'a> {
    field: Field,
    order: &'a ModuleOrder,
    budget: &'a crate::groebner::Budget,
    spairs_used: u64,
    terms_held: u64,
}

impl<'a> MEngine<'a> {
    fn new(field: Field, order: &'a ModuleOrder, budget: &'a crate::groebner::Budget) -> Self {
        MEngine {
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

    /// f - c * x^m * g
    fn sub_scaled(&self, f: &MPoly, c: &Coeff, m: &Monomial, g: &MPoly) -> MPoly {
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            let gm = g.terms[j].mono.mul(m);
            let gp = g.terms[j].pos;
            match self
                .order
                .cmp((f.terms[i].pos, &f.terms[i].mono), (gp, &gm))
            {
                Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(MTerm {
                        coeff: self.field.neg(&self.field.mul(&g.terms[j].coeff, c)),
                        pos: gp,
                        mono: gm,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let gc = self.field.mul(&g.terms[j].coeff, c);
                    let nc = self.field.sub(&f.terms[i].coeff, &gc);
                    if !self.field.is_zero(&nc) {
                        out.push(MTerm {
                            coeff: nc,
                            pos: gp,
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
            out.push(MTerm {
                coeff: self.field.neg(&self.field.mul(&g.terms[j].coeff, c)),
                pos: g.terms[j].pos,
                mono: g.terms[j].mono.mul(m),
            });
            j += 1;
        }
        MPoly { terms: out }
    }

    fn reduce_full(&mut self, mut f: MPoly, basis: &[MPoly]) -> Result<MPoly> {
        let mut done: Vec<MTerm> = Vec::new();
        'outer: while !f.is_zero() {
            self.charge_terms(1)?;
            let t = f.lt().clone();
            for g in basis {
                if g.is_zero() {
                    continue;
                }
                let glt = g.lt();
                if glt.pos == t.pos {
                    if let Some(q) = t.mono.div(&glt.mono) {
                        let c = self.field.div(&t.coeff, &glt.coeff);
                        f = self.sub_scaled(&f, &c, &q, g);
                        continue 'outer;
                    }
                }
            }
            done.push(t);
            f.terms.remove(0);
        }
        done.extend(f.terms);
        Ok(MPoly { terms: done })
    }

    fn svector(&self, f: &MPoly, g: &MPoly) -> MPoly {
        let ft = f.lt();
        let gt = g.lt();
        debug_assert_eq!(ft.pos, gt.pos);
        let l = ft.mono.lcm(&gt.mono);
        let mf = l.div(&ft.mono).unwrap();
        let mg = l.div(&gt.mono).unwrap();
        let scaled_f = MPoly {
            terms: f
                .terms
                .iter()
                .map(|t| MTerm {
                    coeff: self.field.div(&t.coeff, &ft.coeff),
                    pos: t.pos,
                    mono: t.mono.mul(&mf),
                })
                .collect(),
        };
        let c = self.field.inv(&gt.coeff);
        self.sub_scaled(&scaled_f, &c, &mg, g)
    }
}

/// Reduced Gröbner basis of the submodule generated by `vectors`.
pub fn module_gb(
    vectors: &[ModuleVector],
    order: &ModuleOrder,
    budget: &crate::groebner::Budget,
) -> Result<ModuleGB> {
    assert!(!vectors.is_empty(), "at least one vector required");
    let rank = vectors[0].rank();
    let field = vectors[0].field();
    let vars = vectors[0].vars();
    for v in vectors {
        assert_eq!(v.rank(), rank, "rank mismatch");
        assert_eq!(v.field(), field, "field mismatch");
        assert_eq!(v.vars(), vars, "variable count mismatch");
    }
    let mut eng = MEngine::new(field, order, budget);
    let mut basis: Vec<MPoly> = Vec::new();
    for v in vectors {
        if v.is_zero() {
            continue;
        }
        let e = MPoly::from_vector(v, order);
        let r = eng.reduce_full(e, &basis)?;
        if !r.is_zero() {
            basis.push(r);
        }
    }

    struct Pair {
        i: usize,
        j: usize,
        pos: usize,
        lcm: Monomial,
        deg: u32,
    }
    let mut queue: Vec<Pair> = Vec::new();
    let pair_cmp = |a: &Pair, b: &Pair, ord: &ModuleOrder| -> Ordering {
        a.deg
            .cmp(&b.deg)
            .then_with(|| ord.cmp((a.pos, &a.lcm), (b.pos, &b.lcm)))
            .then_with(|| a.i.cmp(&b.i))
            .then_with(|| a.j.cmp(&b.j))
    };
    let push_pairs = |queue: &mut Vec<Pair>, basis: &[MPoly], k: usize, ord: &ModuleOrder| {
        for i in 0..k {
            if basis[i].lt().pos != basis[k].lt().pos {
                continue;
            }
            let lcm = basis[i].lt().mono.lcm(&basis[k].lt().mono);
            let deg = lcm.degree();
            let p = Pair {
                i,
                j: k,
                pos: basis[k].lt().pos,
                lcm,
                deg,
            };
            let pos = queue
                .binary_search_by(|q| pair_cmp(&p, q, ord).then(Ordering::Less))
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
        // chain criterion (the coprimality shortcut is unsound for modules)
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == pair.i || k == pair.j || g.lt().pos != pair.pos {
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
        let s = eng.svector(&basis[pair.i], &basis[pair.j]);
        let r = eng.reduce_full(s, &basis)?;
        if !r.is_zero() {
            basis.push(r);
            let k = basis.len() - 1;
            push_pairs(&mut queue, &basis, k, order);
        }
    }

    // minimalize
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (li, lj) = (basis[i].lt(), basis[j].lt());
            if lj.pos == li.pos
                && lj.mono.divides(&li.mono)
                && (lj.mono != li.mono || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<MPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();

    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let current = minimal[i].clone();
            let others: Vec<MPoly> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = eng.reduce_full(current, &others)?;
            let differs = r.terms.len() != minimal[i].terms.len()
                || r.terms
                    .iter()
                    .zip(&minimal[i].terms)
                    .any(|(a, b)| a.coeff != b.coeff || a.pos != b.pos || a.mono != b.mono);
            if differs {
                minimal[i] = r;
                changed = true;
            }
        }
        minimal.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }

    let mut gens: Vec<ModuleVector> = minimal
        .iter()
        .map(|e| {
            let inv = field.inv(&e.lt().coeff);
            let scaled = MPoly {
                terms: e
                    .terms
                    .iter()
                    .map(|t| MTerm {
                        coeff: field.mul(&t.coeff, &inv),
                        pos: t.pos,
                        mono: t.mono.clone(),
                    })
                    .collect(),
            };
            scaled.to_vector(field, vars, rank)
        })
        .collect();
    gens.sort_by(|a, b| {
        let ea = MPoly::from_vector(a, order);
        let eb = MPoly::from_vector(b, order);
        order.cmp(
            (ea.lt().pos, &ea.lt().mono),
            (eb.lt().pos, &eb.lt().mono),
        )
    });

    Ok(ModuleGB {
        order: order.clone(),
        field,
        vars,
        rank,
        gens,
    })
}

/// Module normal form; the vector lies in the submodule iff the result is
/// the zero vector.
pub fn module_normal_form(
    v: &ModuleVector,
    gb: &ModuleGB,
    budget: &crate::groebner::Budget,
) -> Result<ModuleVector> {
    assert_eq!(v.rank(), gb.rank, "rank mismatch");
    let mut eng = MEngine::new(gb.field, &gb.order, budget);
    let basis: Vec<MPoly> = gb
        .gens
        .iter()
        .map(|g| MPoly::from_vector(g, &gb.order))
        .collect();
    let r = eng.reduce_full(MPoly::from_vector(v, &gb.order), &basis)?;
    Ok(r.to_vector(gb.field, gb.vars, gb.rank))
}

/// Membership test with the normal form as evidence.
pub fn submodule_membership(
    v: &ModuleVector,
    gb: &ModuleGB,
    budget: &crate::groebner::Budget,
) -> Result<(bool, ModuleVector)> {
    let nf = module_normal_form(v, gb, budget)?;
    Ok((nf.is_zero(), nf))
}

/// Generating set of the syzygy module `{(c_1..c_m) : Σ c_j v_j = 0}`.
///
/// Computed by tagging each input with a fresh unit position, eliminating the
/// value positions, and collecting basis members whose value part vanished.
pub fn syzygies(
    vectors: &[ModuleVector],
    value_order: &ModuleOrder,
    budget: &crate::groebner::Budget,
) -> Result<Vec<ModuleVector>> {
    assert!(!vectors.is_empty(), "at least one vector required");
    let rank = vectors[0].rank();
    let m = vectors.len();
    let field = vectors[0].field();
    let vars = vectors[0].vars();
    let ext_order = ModuleOrder::Elim {
        value_positions: rank,
        inner: Box::new(match value_order {
            ModuleOrder::Top { order } | ModuleOrder::Pot { order } => ModuleOrder::Top {
                order: order.clone(),
            },
            other => other.clone(),
        }),
    };
    let tagged: Vec<ModuleVector> = vectors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut comps = v.components().to_vec();
            for i in 0..m {
                comps.push(if i == j {
                    Polynomial::one(field, vars)
                } else {
                    Polynomial::zero(field, vars)
                });
            }
            ModuleVector::new(comps)
        })
        .collect();
    let gb = module_gb(&tagged, &ext_order, budget)?;
    let mut rows = Vec::new();
    for g in gb.generators() {
        let (value, tags) = g.components().split_at(rank);
        if value.iter().all(|p| p.is_zero()) {
            rows.push(ModuleVector::new(tags.to_vec()));
        }
    }
    Ok(rows)
}
