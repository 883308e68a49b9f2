//! Equivariant modules over a groupoid presentation: free modules with an
//! action given by matrices (constant groups) or a comodule structure
//! (coactions), their invariants over a supplied invariant ring, and the
//! comparison of a module with the span of its invariants.

use crate::error::{Error, Result};
use crate::groebner::Budget;
use crate::groupoids::HopfData;
use crate::modules::{module_gb, submodule_membership, ModuleOrder, ModuleVector};
use crate::poly::Polynomial;
use crate::rings::{
    finiteness_certificate, tensor_over_base, GraphRing, PresentedRing, RingMap,
    SaturationLimits,
};
use crate::span::SpanEngine;

/// Action data for a free module of finite rank over the base ring.
#[derive(Debug, Clone)]
pub enum ModuleAction {
    /// Constant group: a closed element list with one invertible matrix per
    /// element; `matrices[s][i][j]` is the coefficient of the j-th basis
    /// vector in the image of the i-th.
    Matrices {
        elements: Vec<RingMap>,
        matrices: Vec<Vec<Vec<Polynomial>>>,
        /// Indices of the originally supplied generators inside `elements`.
        generator_indices: Vec<usize>,
    },
    /// Comodule structure over a Hopf algebra: `comodule[i][j] ∈ B ⊗ H` is
    /// the coefficient of the j-th basis vector in the image of the i-th.
    Coaction {
        hopf: HopfData,
        ring_coaction: RingMap,
        comodule: Vec<Vec<Polynomial>>,
    },
}

#[derive(Debug, Clone)]
pub struct EquivariantModule {
    pub base: PresentedRing,
    pub labels: Vec<String>,
    pub action: ModuleAction,
}

impl EquivariantModule {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Assemble a constant-group module action from matrices for a
    /// generating set; the group is closed and the matrices are extended
    /// along the closure, checking the cocycle law on every pair.
    pub fn from_matrices(
        base: PresentedRing,
        labels: Vec<String>,
        generators: Vec<(RingMap, Vec<Vec<Polynomial>>)>,
        cap: usize,
        budget: &Budget,
    ) -> Result<EquivariantModule> {
        let rank = labels.len();
        for (_, m) in &generators {
            if m.len() != rank || m.iter().any(|col| col.len() != rank) {
                return Err(Error::Validation("matrix shape must match the rank".into()));
            }
        }
        let id_matrix: Vec<Vec<Polynomial>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| if i == j { base.one() } else { base.zero() })
                    .collect()
            })
            .collect();
        let mut elements: Vec<RingMap> = vec![RingMap::identity(&base)];
        let mut matrices: Vec<Vec<Vec<Polynomial>>> = vec![id_matrix.clone()];
        let mut generator_indices = Vec::new();
        for (sig, m) in &generators {
            if let Some(pos) = elements.iter().position(|e| e.maps_equal(sig)) {
                // same group element supplied twice: matrices must agree
                if !matrices_equal(&base, &matrices[pos], m) {
                    return Err(Error::Validation(
                        "conflicting matrices for one group element".into(),
                    ));
                }
                generator_indices.push(pos);
            } else {
                elements.push(sig.clone());
                matrices.push(normalize_matrix(&base, m));
                generator_indices.push(elements.len() - 1);
            }
        }
        // close under products; matrices extend by the twisted product
        let mut frontier: Vec<usize> = (0..elements.len()).collect();
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            for &i in &frontier {
                for j in 0..elements.len() {
                    let prod_map = elements[j].compose(&elements[i])?;
                    let prod_matrix =
                        twisted_product(&base, &elements[i], &matrices[i], &matrices[j]);
                    match elements.iter().position(|e| e.maps_equal(&prod_map)) {
                        Some(pos) => {
                            if !matrices_equal(&base, &matrices[pos], &prod_matrix) {
                                return Err(Error::Validation(
                                    "action matrices violate the group law".into(),
                                ));
                            }
                        }
                        None => {
                            elements.push(prod_map);
                            matrices.push(prod_matrix);
                            fresh.push(elements.len() - 1);
                            if elements.len() > cap {
                                return Err(Error::NotAGroup(format!(
                                    "closure exceeds {cap} elements"
                                )));
                            }
                        }
                    }
                }
            }
            frontier = fresh;
        }
        let _ = budget;
        Ok(EquivariantModule {
            base,
            labels,
            action: ModuleAction::Matrices {
                elements,
                matrices,
                generator_indices,
            },
        })
    }

    /// Assemble a comodule action and verify the comodule axioms on the
    /// basis.
    pub fn from_comodule(
        base: PresentedRing,
        labels: Vec<String>,
        hopf: HopfData,
        ring_coaction: RingMap,
        comodule: Vec<Vec<Polynomial>>,
        budget: &Budget,
    ) -> Result<EquivariantModule> {
        let rank = labels.len();
        if comodule.len() != rank || comodule.iter().any(|col| col.len() != rank) {
            return Err(Error::Validation("comodule shape must match the rank".into()));
        }
        let c = ring_coaction.target();
        let field = base.field();
        let nb = base.vars();
        let nh = hopf.ring.vars();
        let total_c = nb + nh;
        let comodule: Vec<Vec<Polynomial>> = comodule
            .iter()
            .map(|col| col.iter().map(|p| c.normal_form(p)).collect())
            .collect();

        // counit law on the basis
        let counit_consts = hopf
            .counit
            .images()
            .iter()
            .map(|p| {
                if p.is_zero() {
                    Ok(field.zero())
                } else if p.is_constant() {
                    Ok(p.terms()[0].coeff.clone())
                } else {
                    Err(Error::Validation("counit images must be constants".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let to_base_images: Vec<Polynomial> = (0..total_c)
            .map(|j| {
                if j < nb {
                    base.variable(j)
                } else {
                    Polynomial::constant(field, nb, counit_consts[j - nb].clone())
                }
            })
            .collect();
        let to_base = RingMap::new(c.clone(), base.clone(), to_base_images, budget)?;
        for i in 0..rank {
            for j in 0..rank {
                let back = to_base.apply(&comodule[i][j]);
                let expected = if i == j { base.one() } else { base.zero() };
                if !base.contains(&back.sub(&expected)) {
                    return Err(Error::CoactionAxiomFailure {
                        axiom: "comodule counit",
                        generator: labels[i].clone(),
                    });
                }
            }
        }

        // coassociativity on the basis, inside B ⊗ H ⊗ H
        let ground_c = RingMap::from_ground(c);
        let ground_h = RingMap::from_ground(&hopf.ring);
        let cube = tensor_over_base(&ground_c, &ground_h, budget)?;
        let total3 = cube.ring.vars();
        let embed_c: Vec<usize> = (0..total_c).collect();
        // ψ: B ⊗ H → B ⊗ H ⊗ H placing the H part in the last block
        let psi_images: Vec<Polynomial> = (0..total_c)
            .map(|j| {
                if j < nb {
                    ring_coaction.images()[j].map_vars(total3, &embed_c)
                } else {
                    Polynomial::variable(field, total3, nb + nh + (j - nb))
                }
            })
            .collect();
        let psi = RingMap::new(c.clone(), cube.ring.clone(), psi_images, budget)?;
        let comul_shift: Vec<usize> = (0..2 * nh).map(|i| nb + i).collect();
        let delta_ext_images: Vec<Polynomial> = (0..total_c)
            .map(|j| {
                if j < nb {
                    Polynomial::variable(field, total3, j)
                } else {
                    hopf.comul.images()[j - nb].map_vars(total3, &comul_shift)
                }
            })
            .collect();
        let delta_ext = RingMap::new(c.clone(), cube.ring.clone(), delta_ext_images, budget)?;
        let embed_into_cube: Vec<usize> = (0..total_c).collect();
        for i in 0..rank {
            for k in 0..rank {
                // Σ_j ψ(c_{ji}) · c_{kj}  ==  (id ⊗ Δ)(c_{ki})
                let mut lhs = Polynomial::zero(field, total3);
                for j in 0..rank {
                    let a = psi.apply(&comodule[i][j]);
                    let b = comodule[j][k].map_vars(total3, &embed_into_cube);
                    lhs = lhs.add(&a.mul(&b));
                }
                let rhs = delta_ext.apply(&comodule[i][k]);
                if !cube.ring.contains(&lhs.sub(&rhs)) {
                    return Err(Error::CoactionAxiomFailure {
                        axiom: "comodule coassociativity",
                        generator: labels[i].clone(),
                    });
                }
            }
        }

        Ok(EquivariantModule {
            base,
            labels,
            action: ModuleAction::Coaction {
                hopf,
                ring_coaction,
                comodule,
            },
        })
    }

    /// Image of a module vector under the semilinear action of one group
    /// element (constant-group case only).
    pub fn apply_element(&self, index: usize, v: &[Polynomial]) -> Vec<Polynomial> {
        let ModuleAction::Matrices {
            elements, matrices, ..
        } = &self.action
        else {
            panic!("apply_element requires a constant-group action");
        };
        let sig = &elements[index];
        let m = &matrices[index];
        let rank = self.rank();
        let mut out = vec![self.base.zero(); rank];
        for (i, c) in v.iter().enumerate() {
            let tc = sig.apply(c);
            for (j, out_j) in out.iter_mut().enumerate() {
                *out_j = out_j.add(&tc.mul(&m[i][j]));
            }
        }
        out.iter().map(|p| self.base.normal_form(p)).collect()
    }
}

fn normalize_matrix(base: &PresentedRing, m: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    m.iter()
        .map(|col| col.iter().map(|p| base.normal_form(p)).collect())
        .collect()
}

fn matrices_equal(base: &PresentedRing, a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> bool {
    a.iter().zip(b).all(|(ca, cb)| {
        ca.iter()
            .zip(cb)
            .all(|(x, y)| base.contains(&x.sub(y)))
    })
}

/// Matrix of `Φ_a ∘ Φ_b` where `a` twists the coefficients of `M_b`.
fn twisted_product(
    base: &PresentedRing,
    a: &RingMap,
    m_a: &[Vec<Polynomial>],
    m_b: &[Vec<Polynomial>],
) -> Vec<Vec<Polynomial>> {
    let rank = m_a.len();
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|k| {
                    let mut acc = base.zero();
                    for j in 0..rank {
                        acc = acc.add(&a.apply(&m_b[i][j]).mul(&m_a[j][k]));
                    }
                    base.normal_form(&acc)
                })
                .collect()
        })
        .collect()
}

/// Outcome of comparing a module with the span of its invariants.
#[derive(Debug, Clone)]
pub struct DescentVerdict {
    /// Generators of the invariants as a module over the invariant subring.
    pub invariants_generators: Vec<Vec<Polynomial>>,
    /// The same vectors, read as generators of the image submodule over the
    /// base.
    pub counit_image: Vec<Vec<Polynomial>>,
    pub is_isomorphism: bool,
    /// Index of a basis vector outside the image when the comparison fails.
    pub cokernel_witness: Option<usize>,
}

/// Generators over the invariant subring of the fixed vectors of the module.
///
/// The fixed conditions are linear with coefficients moved into the subring,
/// so they form a coefficient-restricted kernel in the graph ring of the
/// base (or of the arrow ring, for coactions) over the invariants.
pub fn module_invariants(
    m: &EquivariantModule,
    invariant_gens: &[Polynomial],
    saturation: &SaturationLimits,
    budget: &Budget,
) -> Result<Vec<Vec<Polynomial>>> {
    let base = &m.base;
    let rank = m.rank();
    let field = base.field();
    let names: Vec<String> = (1..=invariant_gens.len()).map(|i| format!("w{i}")).collect();
    let free = PresentedRing::free(field, names);
    let a_to_b = RingMap::new(
        free.clone(),
        base.clone(),
        invariant_gens.iter().map(|a| base.normal_form(a)).collect(),
        budget,
    )?;
    let cert = finiteness_certificate(&a_to_b, saturation, budget)?;
    let span_basis = &cert.generators;

    match &m.action {
        ModuleAction::Matrices {
            elements,
            matrices,
            generator_indices,
        } => {
            // every invariant generator must be fixed by the group
            for (idx, a) in invariant_gens.iter().enumerate() {
                for &s in generator_indices {
                    if !base.contains(&elements[s].apply(a).sub(a)) {
                        return Err(Error::NotInvariant { index: idx });
                    }
                }
            }
            let gen_set: Vec<usize> = if generator_indices.is_empty() {
                (0..elements.len()).collect()
            } else {
                generator_indices.clone()
            };
            let graph = GraphRing::new(&a_to_b, budget)?;
            let total = graph.x_vars + graph.w_vars;
            let value_rank = rank * gen_set.len();
            // unknown (i, l) ↦ coefficient of basis vector i times span element l
            let mut targets: Vec<ModuleVector> = Vec::new();
            for i in 0..rank {
                for b_l in span_basis {
                    let mut comps =
                        vec![Polynomial::zero(field, total); value_rank];
                    for (s_pos, &s) in gen_set.iter().enumerate() {
                        let tb = elements[s].apply(b_l);
                        for k in 0..rank {
                            let mut entry = tb.mul(&matrices[s][i][k]);
                            if i == k {
                                entry = entry.sub(b_l);
                            }
                            comps[s_pos * rank + k] =
                                graph.embed_target(&base.normal_form(&entry));
                        }
                    }
                    targets.push(ModuleVector::new(comps));
                }
            }
            let engine = SpanEngine::new(&graph.gb, graph.x_vars, &targets, budget)?;
            let rows = engine.relation_rows();
            let mut out: Vec<Vec<Polynomial>> = Vec::new();
            for row in rows {
                let mut vector = vec![base.zero(); rank];
                for (q, h) in row.iter().enumerate() {
                    let i = q / span_basis.len();
                    let l = q % span_basis.len();
                    let coeff = a_to_b.apply(h).mul(&span_basis[l]);
                    vector[i] = vector[i].add(&coeff);
                }
                let vector: Vec<Polynomial> =
                    vector.iter().map(|p| base.normal_form(p)).collect();
                if vector.iter().all(|p| p.is_zero()) || out.contains(&vector) {
                    continue;
                }
                // fixedness replay
                for &s in &gen_set {
                    let moved = m.apply_element(s, &vector);
                    for (a, b) in moved.iter().zip(&vector) {
                        if !base.contains(&a.sub(b)) {
                            return Err(Error::Internal(
                                "computed invariant is not fixed".into(),
                            ));
                        }
                    }
                }
                out.push(vector);
            }
            out.sort();
            Ok(out)
        }
        ModuleAction::Coaction {
            ring_coaction,
            comodule,
            ..
        } => {
            let c = ring_coaction.target();
            let nb = base.vars();
            let embed_b: Vec<usize> = (0..nb).collect();
            // invariance of the subring generators: ρ(a) = a ⊗ 1
            for (idx, a) in invariant_gens.iter().enumerate() {
                let lifted = base.normal_form(a).map_vars(c.vars(), &embed_b);
                if !c.contains(&ring_coaction.apply(a).sub(&lifted)) {
                    return Err(Error::NotInvariant { index: idx });
                }
            }
            // graph of the invariants inside the arrow ring
            let marked: Vec<Polynomial> = invariant_gens
                .iter()
                .map(|a| c.normal_form(&base.normal_form(a).map_vars(c.vars(), &embed_b)))
                .collect();
            let names: Vec<String> =
                (1..=invariant_gens.len()).map(|i| format!("w{i}")).collect();
            let free_c = PresentedRing::free(field, names);
            let a_to_c = RingMap::new(free_c, c.clone(), marked, budget)?;
            let graph = GraphRing::new(&a_to_c, budget)?;
            let total = graph.x_vars + graph.w_vars;
            let value_rank = rank;
            let mut targets: Vec<ModuleVector> = Vec::new();
            for i in 0..rank {
                for b_l in span_basis {
                    let rho_b = ring_coaction.apply(b_l);
                    let lifted_b = b_l.map_vars(c.vars(), &embed_b);
                    let mut comps = vec![Polynomial::zero(field, total); value_rank];
                    for k in 0..rank {
                        let mut entry = rho_b.mul(&comodule[i][k]);
                        if i == k {
                            entry = entry.sub(&lifted_b);
                        }
                        comps[k] = graph.embed_target(&c.normal_form(&entry));
                    }
                    targets.push(ModuleVector::new(comps));
                }
            }
            let engine = SpanEngine::new(&graph.gb, graph.x_vars, &targets, budget)?;
            let rows = engine.relation_rows();
            let mut out: Vec<Vec<Polynomial>> = Vec::new();
            for row in rows {
                let mut vector = vec![base.zero(); rank];
                for (q, h) in row.iter().enumerate() {
                    let i = q / span_basis.len();
                    let l = q % span_basis.len();
                    let coeff = a_to_b.apply(h).mul(&span_basis[l]);
                    vector[i] = vector[i].add(&coeff);
                }
                let vector: Vec<Polynomial> =
                    vector.iter().map(|p| base.normal_form(p)).collect();
                if vector.iter().all(|p| p.is_zero()) || out.contains(&vector) {
                    continue;
                }
                // fixedness replay: ρ_M(v) = v ⊗ 1
                for k in 0..rank {
                    let mut lhs = Polynomial::zero(field, c.vars());
                    for i in 0..rank {
                        lhs = lhs.add(&ring_coaction.apply(&vector[i]).mul(&comodule[i][k]));
                    }
                    let rhs = vector[k].map_vars(c.vars(), &embed_b);
                    if !c.contains(&lhs.sub(&rhs)) {
                        return Err(Error::Internal(
                            "computed invariant is not fixed".into(),
                        ));
                    }
                }
                out.push(vector);
            }
            out.sort();
            Ok(out)
        }
    }
}

/// Compare the module with the base-span of its invariants: an isomorphism
/// exactly when every basis vector lies in that span.
pub fn counit_check(
    m: &EquivariantModule,
    invariant_gens: &[Polynomial],
    saturation: &SaturationLimits,
    budget: &Budget,
) -> Result<DescentVerdict> {
    let invariants = module_invariants(m, invariant_gens, saturation, budget)?;
    let base = &m.base;
    let rank = m.rank();
    let field = base.field();
    let vars = base.vars();
    let order = ModuleOrder::top_degrevlex(vars);
    // submodule over the base generated by the invariants, relative to the
    // defining relations of the base
    let mut gens: Vec<ModuleVector> = Vec::new();
    for v in &invariants {
        gens.push(ModuleVector::new(v.clone()));
    }
    for rel in base.relations() {
        for i in 0..rank {
            let mut comps = vec![Polynomial::zero(field, vars); rank];
            comps[i] = rel.clone();
            gens.push(ModuleVector::new(comps));
        }
    }
    let mut is_isomorphism = true;
    let mut cokernel_witness = None;
    if gens.is_empty() {
        is_isomorphism = rank == 0;
        cokernel_witness = (rank > 0).then_some(0);
    } else {
        let gb = module_gb(&gens, &order, budget)?;
        for i in 0..rank {
            let mut comps = vec![Polynomial::zero(field, vars); rank];
            comps[i] = base.one();
            let (inside, _) = submodule_membership(&ModuleVector::new(comps), &gb, budget)?;
            if !inside {
                is_isomorphism = false;
                cokernel_witness = Some(i);
                break;
            }
        }
    }
    Ok(DescentVerdict {
        counit_image: invariants.clone(),
        invariants_generators: invariants,
        is_isomorphism,
        cokernel_witness,
    })
}

/// Equality of two submodules of the free module over the base, relative to
/// the base's defining relations.
pub fn base_submodules_equal(
    base: &PresentedRing,
    rank: usize,
    gens_a: &[Vec<Polynomial>],
    gens_b: &[Vec<Polynomial>],
    budget: &Budget,
) -> Result<bool> {
    let field = base.field();
    let vars = base.vars();
    let order = ModuleOrder::top_degrevlex(vars);
    let build = |gens: &[Vec<Polynomial>]| -> Vec<ModuleVector> {
        let mut rows: Vec<ModuleVector> = gens
            .iter()
            .map(|v| ModuleVector::new(v.clone()))
            .collect();
        for rel in base.relations() {
            for i in 0..rank {
                let mut comps = vec![Polynomial::zero(field, vars); rank];
                comps[i] = rel.clone();
                rows.push(ModuleVector::new(comps));
            }
        }
        rows
    };
    let rows_a = build(gens_a);
    let rows_b = build(gens_b);
    if rows_a.is_empty() || rows_b.is_empty() {
        return Ok(rows_a.is_empty() == rows_b.is_empty());
    }
    let gb_a = module_gb(&rows_a, &order, budget)?;
    let gb_b = module_gb(&rows_b, &order, budget)?;
    for v in &rows_a {
        let (inside, _) = submodule_membership(v, &gb_b, budget)?;
        if !inside {
            return Ok(false);
        }
    }
    for v in &rows_b {
        let (inside, _) = submodule_membership(v, &gb_a, budget)?;
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}
