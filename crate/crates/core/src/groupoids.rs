//! Groupoid presentations from finite group(-scheme) actions on affine
//! schemes: constant-group actions given by automorphism lists and coactions
//! of finite group schemes given by Hopf data, together with stabilizers,
//! invariant checks and the complexity invariant.

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::groebner::Budget;
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::rings::{
    dominance, finiteness_certificate, subalgebra_presentation, tensor_over_base,
    FinitenessCertificate, GraphRing, PresentedRing, RingMap, SaturationLimits, TensorRing,
};
use crate::canseq::{canonical_sequence, CanonicalSequenceResult, SeqLength, SequenceConfig};

/// Coordinate ring of a finite group scheme with its comultiplication,
/// counit and antipode; the axioms are verified on generators at
/// construction.
#[derive(Debug, Clone)]
pub struct HopfData {
    pub ring: PresentedRing,
    /// H ⊗ H with its insertions.
    pub square: TensorRing,
    pub comul: RingMap,
    pub counit: RingMap,
    pub antipode: RingMap,
}

impl HopfData {
    pub fn new(
        ring: PresentedRing,
        comul_images: Vec<Polynomial>,
        counit_images: Vec<Polynomial>,
        antipode_images: Vec<Polynomial>,
        budget: &Budget,
    ) -> Result<HopfData> {
        let ground = RingMap::from_ground(&ring);
        let square = tensor_over_base(&ground, &ground, budget)?;
        let comul = RingMap::new(ring.clone(), square.ring.clone(), comul_images, budget)?;
        let counit = RingMap::new(
            ring.clone(),
            PresentedRing::ground(ring.field()),
            counit_images,
            budget,
        )?;
        let antipode = RingMap::new(ring.clone(), ring.clone(), antipode_images, budget)?;
        let data = HopfData {
            ring,
            square,
            comul,
            counit,
            antipode,
        };
        data.verify_axioms(budget)?;
        Ok(data)
    }

    fn generator_name(&self, i: usize) -> String {
        self.ring.var_names()[i].clone()
    }

    fn verify_axioms(&self, budget: &Budget) -> Result<()> {
        let h = &self.ring;
        let n = h.vars();
        let ground = RingMap::from_ground(&self.square.ring);
        let ground_h = RingMap::from_ground(h);
        // (H ⊗ H) ⊗ H: blocks [z, z', z'']
        let cube = tensor_over_base(&ground, &ground_h, budget)?;
        let total = cube.ring.vars();
        let field = h.field();

        // Δ ⊗ id and id ⊗ Δ into the cube
        let embed12: Vec<usize> = (0..2 * n).collect();
        let shift1: Vec<usize> = (0..n).map(|i| n + i).collect();
        let dl_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| {
                if j < n {
                    self.comul.images()[j].map_vars(total, &embed12)
                } else {
                    Polynomial::variable(field, total, n + j)
                }
            })
            .collect();
        let dl = RingMap::new(self.square.ring.clone(), cube.ring.clone(), dl_images, budget)?;
        let dr_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| {
                if j < n {
                    Polynomial::variable(field, total, j)
                } else {
                    self.comul.images()[j - n].map_vars(total, &shift_by(n, 2 * n, total))
                }
            })
            .collect();
        let dr = RingMap::new(self.square.ring.clone(), cube.ring.clone(), dr_images, budget)?;
        for i in 0..n {
            let lhs = dl.apply(&self.comul.images()[i]);
            let rhs = dr.apply(&self.comul.images()[i]);
            if !cube.ring.contains(&lhs.sub(&rhs)) {
                return Err(Error::HopfAxiomFailure {
                    axiom: "coassociativity",
                    generator: self.generator_name(i),
                });
            }
        }
        let _ = shift1;

        // counit laws: (ε ⊗ id)∘Δ = id = (id ⊗ ε)∘Δ
        let counit_consts: Vec<Coeff> = self
            .counit
            .images()
            .iter()
            .map(|p| constant_value(p, field))
            .collect::<Result<Vec<_>>>()?;
        let eps_left_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| {
                if j < n {
                    Polynomial::constant(field, n, counit_consts[j].clone())
                } else {
                    Polynomial::variable(field, n, j - n)
                }
            })
            .collect();
        let eps_left = RingMap::new(self.square.ring.clone(), h.clone(), eps_left_images, budget)?;
        let eps_right_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| {
                if j < n {
                    Polynomial::variable(field, n, j)
                } else {
                    Polynomial::constant(field, n, counit_consts[j - n].clone())
                }
            })
            .collect();
        let eps_right =
            RingMap::new(self.square.ring.clone(), h.clone(), eps_right_images, budget)?;
        for i in 0..n {
            let v = h.variable(i);
            if !h.contains(&eps_left.apply(&self.comul.images()[i]).sub(&v))
                || !h.contains(&eps_right.apply(&self.comul.images()[i]).sub(&v))
            {
                return Err(Error::HopfAxiomFailure {
                    axiom: "counit",
                    generator: self.generator_name(i),
                });
            }
        }

        // antipode: m∘(S ⊗ id)∘Δ = η∘ε = m∘(id ⊗ S)∘Δ
        let mult_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| h.variable(j % n))
            .collect();
        let mult = RingMap::new(self.square.ring.clone(), h.clone(), mult_images, budget)?;
        let s_left_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| {
                if j < n {
                    self.antipode.images()[j].map_vars(2 * n, &(0..n).collect::<Vec<_>>())
                } else {
                    Polynomial::variable(field, 2 * n, j)
                }
            })
            .collect();
        let s_left = RingMap::new(
            self.square.ring.clone(),
            self.square.ring.clone(),
            s_left_images,
            budget,
        )?;
        let s_right_images: Vec<Polynomial> = (0..2 * n)
            .map(|j| {
                if j < n {
                    Polynomial::variable(field, 2 * n, j)
                } else {
                    self.antipode.images()[j - n]
                        .map_vars(2 * n, &(n..2 * n).collect::<Vec<_>>())
                }
            })
            .collect();
        let s_right = RingMap::new(
            self.square.ring.clone(),
            self.square.ring.clone(),
            s_right_images,
            budget,
        )?;
        for i in 0..n {
            let target = Polynomial::constant(field, n, counit_consts[i].clone());
            let lhs = mult.apply(&s_left.apply(&self.comul.images()[i]));
            let rhs = mult.apply(&s_right.apply(&self.comul.images()[i]));
            if !h.contains(&lhs.sub(&target)) || !h.contains(&rhs.sub(&target)) {
                return Err(Error::HopfAxiomFailure {
                    axiom: "antipode",
                    generator: self.generator_name(i),
                });
            }
        }
        Ok(())
    }
}

fn shift_by(offset: usize, len: usize, total: usize) -> Vec<usize> {
    let map: Vec<usize> = (0..len).map(|i| offset + i).collect();
    assert!(offset + len <= total);
    map
}

fn constant_value(p: &Polynomial, field: Field) -> Result<Coeff> {
    if p.is_zero() {
        return Ok(field.zero());
    }
    if !p.is_constant() {
        return Err(Error::Validation("expected a constant".into()));
    }
    Ok(p.terms()[0].coeff.clone())
}

/// How the arrow ring of a constant group is presented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAlgebraEncoding {
    /// One selector variable `u` with minimal polynomial `∏ (u - c_i)`;
    /// available when the field has |G| distinct scalars.
    Selector { constants: Vec<Coeff> },
    /// One idempotent variable per group element.
    Idempotents,
}

#[derive(Debug, Clone)]
pub enum GroupOrigin {
    ConstantGroup {
        /// Closed element list, identity first.
        elements: Vec<RingMap>,
        /// Projections arrow ring → base, one per element.
        projections: Vec<RingMap>,
        encoding: GroupAlgebraEncoding,
    },
    Coaction {
        hopf: HopfData,
    },
}

/// A groupoid presented by source and target maps on the arrow ring.
#[derive(Debug, Clone)]
pub struct GroupoidPresentation {
    pub base: PresentedRing,
    pub arrows: PresentedRing,
    pub source_map: RingMap,
    pub target_map: RingMap,
    pub origin: GroupOrigin,
}

/// Close a list of automorphisms under composition; identity is always
/// included. Fails when the closure exceeds `cap`.
pub fn close_group(base: &PresentedRing, autos: &[RingMap], cap: usize) -> Result<Vec<RingMap>> {
    let id = RingMap::identity(base);
    let mut elements: Vec<RingMap> = vec![id];
    for a in autos {
        if a.source() != base || a.target() != base {
            return Err(Error::AmbientMismatch(
                "automorphisms must be endomaps of the base".into(),
            ));
        }
        if !elements.iter().any(|e| e.maps_equal(a)) {
            elements.push(a.clone());
        }
    }
    let mut frontier: Vec<usize> = (0..elements.len()).collect();
    while !frontier.is_empty() {
        let mut fresh: Vec<usize> = Vec::new();
        for &i in &frontier {
            for j in 0..elements.len() {
                // product g·h acts by x ↦ g(h(x))
                let prod = elements[j].compose(&elements[i])?;
                if !elements.iter().any(|e| e.maps_equal(&prod)) {
                    elements.push(prod);
                    fresh.push(elements.len() - 1);
                    if elements.len() > cap {
                        return Err(Error::NotAGroup(format!(
                            "closure exceeds {cap} elements"
                        )));
                    }
                }
            }
        }
        frontier = fresh;
    }
    // every element must have an inverse within the closure
    for (i, e) in elements.iter().enumerate() {
        let has_inverse = elements.iter().any(|f| {
            e.compose(f)
                .map(|p| p.maps_equal(&RingMap::identity(base)))
                .unwrap_or(false)
        });
        if !has_inverse {
            return Err(Error::NotAGroup(format!("element #{i} has no inverse")));
        }
    }
    Ok(elements)
}

/// Build the groupoid of a constant-group action. The arrow ring is a
/// product of |G| copies of the base, presented with a single selector
/// variable when the field has enough distinct scalars and with idempotent
/// variables otherwise.
pub fn action_from_automorphisms(
    base: &PresentedRing,
    autos: &[RingMap],
    cap: usize,
    budget: &Budget,
) -> Result<GroupoidPresentation> {
    let elements = close_group(base, autos, cap)?;
    let g = elements.len();
    let field = base.field();
    let nb = base.vars();
    // A single selector variable with minimal polynomial u(u-1) suffices for
    // two elements over any field. For larger groups the orthogonal
    // idempotent presentation keeps every relation quadratic, which the
    // basis computations handle far better than a degree-|G| minimal
    // polynomial with interpolation coefficients.
    let use_selector = g <= 2;
    let mut used: Vec<String> = base.var_names().to_vec();

    if use_selector {
        let constants: Vec<Coeff> = (0..g as i64).map(|i| field.from_i64(i)).collect();
        let sel_name = {
            let mut names = used.clone();
            crate_freshen(&mut names, "u")
        };
        used.push(sel_name.clone());
        let total = nb + 1;
        let embed: Vec<usize> = (0..nb).collect();
        // minimal polynomial ∏ (u - c_i)
        let u = Polynomial::variable(field, total, nb);
        let mut minimal = Polynomial::one(field, total);
        for c in &constants {
            minimal = minimal.mul(&u.sub(&Polynomial::constant(field, total, c.clone())));
        }
        let mut rels: Vec<Polynomial> = base
            .relations()
            .iter()
            .map(|r| r.map_vars(total, &embed))
            .collect();
        rels.push(minimal);
        let names: Vec<String> = base
            .var_names()
            .iter()
            .cloned()
            .chain(std::iter::once(sel_name))
            .collect();
        let arrows = PresentedRing::new(field, names, &rels, budget)?;
        // interpolation idempotents L_i(u)
        let mut idems: Vec<Polynomial> = Vec::with_capacity(g);
        for i in 0..g {
            let mut num = Polynomial::one(field, total);
            let mut den = field.one();
            for (j, c) in constants.iter().enumerate() {
                if j == i {
                    continue;
                }
                num = num.mul(&u.sub(&Polynomial::constant(field, total, c.clone())));
                den = field.mul(
                    &den,
                    &field.sub(&constants[i], c),
                );
            }
            idems.push(arrows.normal_form(&num.scaled(&field.inv(&den))));
        }
        let source_map = RingMap::new(
            base.clone(),
            arrows.clone(),
            (0..nb)
                .map(|i| Polynomial::variable(field, total, i))
                .collect(),
            budget,
        )?;
        let target_images: Vec<Polynomial> = (0..nb)
            .map(|i| {
                let mut acc = Polynomial::zero(field, total);
                for (sig, idem) in elements.iter().zip(&idems) {
                    let im = sig.images()[i].map_vars(total, &embed);
                    acc = acc.add(&im.mul(idem));
                }
                arrows.normal_form(&acc)
            })
            .collect();
        let target_map = RingMap::new(base.clone(), arrows.clone(), target_images, budget)?;
        let projections: Vec<RingMap> = constants
            .iter()
            .map(|c| {
                let mut images: Vec<Polynomial> =
                    (0..nb).map(|i| base.variable(i)).collect();
                images.push(Polynomial::constant(field, nb, c.clone()));
                RingMap::new(arrows.clone(), base.clone(), images, budget)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupoidPresentation {
            base: base.clone(),
            arrows,
            source_map,
            target_map,
            origin: GroupOrigin::ConstantGroup {
                elements,
                projections,
                encoding: GroupAlgebraEncoding::Selector { constants },
            },
        })
    } else {
        // orthogonal idempotents e_1..e_g summing to 1
        let total = nb + g;
        let embed: Vec<usize> = (0..nb).collect();
        let mut names: Vec<String> = base.var_names().to_vec();
        for i in 1..=g {
            let e = crate_freshen(&mut used, &format!("e{i}"));
            names.push(e);
        }
        let mut rels: Vec<Polynomial> = base
            .relations()
            .iter()
            .map(|r| r.map_vars(total, &embed))
            .collect();
        for i in 0..g {
            let ei = Polynomial::variable(field, total, nb + i);
            rels.push(ei.mul(&ei).sub(&ei));
            for j in i + 1..g {
                let ej = Polynomial::variable(field, total, nb + j);
                rels.push(ei.mul(&ej));
            }
        }
        let mut sum = Polynomial::one(field, total).neg();
        for i in 0..g {
            sum = sum.add(&Polynomial::variable(field, total, nb + i));
        }
        rels.push(sum);
        let arrows = PresentedRing::new(field, names, &rels, budget)?;
        let idems: Vec<Polynomial> = (0..g)
            .map(|i| Polynomial::variable(field, total, nb + i))
            .collect();
        let source_map = RingMap::new(
            base.clone(),
            arrows.clone(),
            (0..nb)
                .map(|i| Polynomial::variable(field, total, i))
                .collect(),
            budget,
        )?;
        let target_images: Vec<Polynomial> = (0..nb)
            .map(|i| {
                let mut acc = Polynomial::zero(field, total);
                for (sig, idem) in elements.iter().zip(&idems) {
                    let im = sig.images()[i].map_vars(total, &embed);
                    acc = acc.add(&im.mul(idem));
                }
                arrows.normal_form(&acc)
            })
            .collect();
        let target_map = RingMap::new(base.clone(), arrows.clone(), target_images, budget)?;
        let projections: Vec<RingMap> = (0..g)
            .map(|k| {
                let mut images: Vec<Polynomial> =
                    (0..nb).map(|i| base.variable(i)).collect();
                for i in 0..g {
                    images.push(if i == k {
                        base.one()
                    } else {
                        base.zero()
                    });
                }
                RingMap::new(arrows.clone(), base.clone(), images, budget)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupoidPresentation {
            base: base.clone(),
            arrows,
            source_map,
            target_map,
            origin: GroupOrigin::ConstantGroup {
                elements,
                projections,
                encoding: GroupAlgebraEncoding::Idempotents,
            },
        })
    }
}

fn crate_freshen(used: &mut Vec<String>, name: &str) -> String {
    let mut candidate = name.to_string();
    while used.iter().any(|n| n == &candidate) {
        candidate.push('\'');
    }
    used.push(candidate.clone());
    candidate
}

/// Build the groupoid of a coaction `ρ: B → B ⊗ H`. The coaction axioms are
/// verified on the base generators.
pub fn action_from_coaction(
    base: &PresentedRing,
    hopf: HopfData,
    coaction_images: Vec<Polynomial>,
    budget: &Budget,
) -> Result<GroupoidPresentation> {
    let ground_b = RingMap::from_ground(base);
    let ground_h = RingMap::from_ground(&hopf.ring);
    let tensor = tensor_over_base(&ground_b, &ground_h, budget)?;
    let arrows = tensor.ring.clone();
    let rho = RingMap::new(base.clone(), arrows.clone(), coaction_images, budget)?;
    let field = base.field();
    let nb = base.vars();
    let nh = hopf.ring.vars();
    let total_c = nb + nh;

    // counit law: (id ⊗ ε)∘ρ = id
    let counit_consts: Vec<Coeff> = hopf
        .counit
        .images()
        .iter()
        .map(|p| constant_value(p, field))
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
    let to_base = RingMap::new(arrows.clone(), base.clone(), to_base_images, budget)?;
    for i in 0..nb {
        let back = to_base.apply(&rho.images()[i]);
        if !base.contains(&back.sub(&base.variable(i))) {
            return Err(Error::CoactionAxiomFailure {
                axiom: "counit",
                generator: base.var_names()[i].clone(),
            });
        }
    }

    // coassociativity: (ρ ⊗ id)∘ρ = (id ⊗ Δ)∘ρ in B ⊗ H ⊗ H
    let ground_c = RingMap::from_ground(&arrows);
    let cube = tensor_over_base(&ground_c, &ground_h, budget)?;
    let total3 = cube.ring.vars();
    let embed_c: Vec<usize> = (0..total_c).collect();
    let rho_ext_images: Vec<Polynomial> = (0..total_c)
        .map(|j| {
            if j < nb {
                rho.images()[j].map_vars(total3, &embed_c)
            } else {
                Polynomial::variable(field, total3, nb + nh + (j - nb))
            }
        })
        .collect();
    let rho_ext = RingMap::new(arrows.clone(), cube.ring.clone(), rho_ext_images, budget)?;
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
    let delta_ext = RingMap::new(arrows.clone(), cube.ring.clone(), delta_ext_images, budget)?;
    for i in 0..nb {
        let lhs = rho_ext.apply(&rho.images()[i]);
        let rhs = delta_ext.apply(&rho.images()[i]);
        if !cube.ring.contains(&lhs.sub(&rhs)) {
            return Err(Error::CoactionAxiomFailure {
                axiom: "coassociativity",
                generator: base.var_names()[i].clone(),
            });
        }
    }

    let source_map = tensor.left.clone();
    Ok(GroupoidPresentation {
        base: base.clone(),
        arrows,
        source_map,
        target_map: rho,
        origin: GroupOrigin::Coaction { hopf },
    })
}

/// The stabilizer subscheme: quotient of the arrow ring by the ideal
/// identifying target with source, with a finiteness verdict over the base.
#[derive(Debug, Clone)]
pub struct StabilizerReport {
    pub ring: PresentedRing,
    pub base_map: RingMap,
    pub certificate: Option<FinitenessCertificate>,
    pub trivial: bool,
}

pub fn stabilizer(
    g: &GroupoidPresentation,
    saturation: &SaturationLimits,
    budget: &Budget,
) -> Result<StabilizerReport> {
    let c = &g.arrows;
    let mut rels: Vec<Polynomial> = c.relations().to_vec();
    for i in 0..g.base.vars() {
        rels.push(g.target_map.images()[i].sub(&g.source_map.images()[i]));
    }
    let ring = PresentedRing::new(c.field(), c.var_names().to_vec(), &rels, budget)?;
    let base_map = RingMap::new(
        g.base.clone(),
        ring.clone(),
        g.source_map
            .images()
            .iter()
            .map(|im| ring.normal_form(im))
            .collect(),
        budget,
    )?;
    let certificate = finiteness_certificate(&base_map, saturation, budget)?;
    let (dominant, _) = dominance(&base_map, budget)?;
    let trivial = dominant && certificate.generators.len() == 1;
    Ok(StabilizerReport {
        ring,
        base_map,
        certificate: Some(certificate),
        trivial,
    })
}

/// One flag per supplied generator: does it equalize target and source?
pub fn verify_invariants(g: &GroupoidPresentation, gens: &[Polynomial]) -> Vec<bool> {
    gens.iter()
        .map(|a| {
            let diff = g.target_map.apply(a).sub(&g.source_map.apply(a));
            g.arrows.contains(&diff)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexityVerdict {
    Exactly(usize),
    AtLeast(usize),
    Undefined { reason: String },
}

#[derive(Debug, Clone)]
pub struct ComplexityReport {
    pub invariant_checks: Vec<bool>,
    pub dominant: bool,
    pub dominance_witness: Option<Polynomial>,
    pub stabilizer: StabilizerReport,
    /// The ring presenting X ×_Y X and the comparison map onto the arrows.
    pub fiber_square: PresentedRing,
    pub comparison: Option<RingMap>,
    pub sequence: Option<CanonicalSequenceResult>,
    pub complexity: ComplexityVerdict,
    pub caveats: Vec<&'static str>,
}

pub const CAVEAT_RELATIVE: &str =
    "complexity is computed relative to the supplied invariant generators";
pub const CAVEAT_FLATNESS: &str = "flatness of the quotient map is not verified";

/// The complexity of the groupoid relative to the supplied invariant ring
/// generators: builds the fiber square of the quotient, the comparison map
/// onto the arrow ring, checks dominance, and measures the canonical
/// sequence of the comparison map.
pub fn complexity(
    g: &GroupoidPresentation,
    invariant_gens: &[Polynomial],
    config: &SequenceConfig,
) -> Result<ComplexityReport> {
    let budget = &config.budget;
    let invariant_checks = verify_invariants(g, invariant_gens);
    if let Some(idx) = invariant_checks.iter().position(|ok| !ok) {
        return Err(Error::NotInvariant { index: idx });
    }
    let stab = stabilizer(g, &config.saturation, budget)?;

    // the subalgebra generated by the invariants, and the base over it
    let names: Vec<String> = (1..=invariant_gens.len()).map(|i| format!("a{i}")).collect();
    let (_a_ring, a_to_b) =
        subalgebra_presentation(&g.base, invariant_gens, &names, budget)?;
    // the base must be finite over the invariants
    let _cert_b = finiteness_certificate(&a_to_b, &config.saturation, budget)?;

    // fiber square D = B ⊗_A B with the comparison onto the arrows
    let tensor = tensor_over_base(&a_to_b, &a_to_b, budget)?;
    let nb = g.base.vars();
    let comparison_images: Vec<Polynomial> = (0..2 * nb)
        .map(|j| {
            if j < nb {
                g.source_map.images()[j].clone()
            } else {
                g.target_map.images()[j - nb].clone()
            }
        })
        .collect();
    let comparison = RingMap::new(
        tensor.ring.clone(),
        g.arrows.clone(),
        comparison_images,
        budget,
    )?;

    let (dominant, witness) = dominance(&comparison, budget)?;
    if !dominant {
        return Ok(ComplexityReport {
            invariant_checks,
            dominant: false,
            dominance_witness: witness,
            stabilizer: stab,
            fiber_square: tensor.ring,
            comparison: Some(comparison),
            sequence: None,
            complexity: ComplexityVerdict::Undefined {
                reason: "comparison map onto the fiber square is not dominant".into(),
            },
            caveats: vec![CAVEAT_RELATIVE, CAVEAT_FLATNESS],
        });
    }

    let sequence = canonical_sequence(&comparison, config)?;
    let complexity = match sequence.length {
        SeqLength::Resolved(n) => ComplexityVerdict::Exactly(n),
        SeqLength::Unresolved { stages_computed } => ComplexityVerdict::AtLeast(stages_computed),
    };
    Ok(ComplexityReport {
        invariant_checks,
        dominant: true,
        dominance_witness: None,
        stabilizer: stab,
        fiber_square: tensor.ring,
        comparison: Some(comparison),
        sequence: Some(sequence),
        complexity,
        caveats: vec![CAVEAT_RELATIVE, CAVEAT_FLATNESS],
    })
}

/// Reynolds averages of the monomials up to the degree bound, pruned to a
/// minimal generating set by iterated subalgebra membership. Only valid when
/// the group order is invertible in the field.
pub fn reynolds_invariant_generators(
    base: &PresentedRing,
    elements: &[RingMap],
    degree_bound: u32,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    if !base.relations().is_empty() {
        return Err(Error::Validation(
            "invariant generation requires a free polynomial ring".into(),
        ));
    }
    let field = base.field();
    let g = elements.len() as u64;
    let p = field.characteristic();
    if p != 0 && g % p == 0 {
        return Err(Error::ModularCase);
    }
    let order_inv = field.inv(&field.from_i64(g as i64));
    let nb = base.vars();

    let mut averages: Vec<Polynomial> = Vec::new();
    for d in 1..=degree_bound {
        for mono in monomials_of_degree(nb, d) {
            let m = Polynomial::from_terms(field, nb, vec![(field.one(), mono)]);
            let mut acc = base.zero();
            for sig in elements {
                acc = acc.add(&sig.apply(&m));
            }
            let avg = acc.scaled(&order_inv);
            if avg.is_zero() {
                continue;
            }
            let monic = avg.monic(&MonomialOrder::degrevlex(nb));
            if !averages.contains(&monic) {
                averages.push(monic);
            }
        }
    }

    // prune: keep only averages outside the subalgebra of those kept so far
    let mut selected: Vec<Polynomial> = Vec::new();
    for cand in averages {
        if selected.is_empty() {
            selected.push(cand);
            continue;
        }
        let names: Vec<String> = (1..=selected.len()).map(|i| format!("w{i}")).collect();
        let free = PresentedRing::free(field, names);
        let marking = RingMap::new(free, base.clone(), selected.clone(), budget)?;
        let graph = GraphRing::new(&marking, budget)?;
        let engine = graph.span_engine(&[base.one()], budget)?;
        if graph.member_of_span(&engine, &cand)?.is_none() {
            selected.push(cand);
        }
    }
    Ok(selected)
}

fn monomials_of_degree(vars: usize, degree: u32) -> Vec<crate::monomial::Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fn rec(
        vars: usize,
        idx: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<crate::monomial::Monomial>,
    ) {
        if idx == vars - 1 {
            current[idx] = remaining;
            out.push(crate::monomial::Monomial(current.clone()));
            return;
        }
        for e in (0..=remaining).rev() {
            current[idx] = e;
            rec(vars, idx + 1, remaining - e, current, out);
        }
        current[idx] = 0;
    }
    if vars == 0 {
        return out;
    }
    rec(vars, 0, degree, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canseq::SequenceConfig;

    fn budget() -> Budget {
        Budget::default()
    }

    fn ring(field: Field, names: &[&str], rels: &[&str]) -> PresentedRing {
        let name_list: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let polys: Vec<Polynomial> = rels
            .iter()
            .map(|src| crate::parse::parse_polynomial(src, field, &name_list).unwrap())
            .collect();
        PresentedRing::new(field, name_list, &polys, &budget()).unwrap()
    }

    pub(crate) fn mu_n_groupoid(field: Field, n: u32) -> GroupoidPresentation {
        let b = ring(field, &["x"], &[]);
        let h = ring(field, &["z"], &[&format!("z^{n} - 1")]);
        let square_names: Vec<String> = vec!["z".into(), "z'".into()];
        let comul = crate::parse::parse_polynomial("z * z'", field, &square_names).unwrap();
        let counit = Polynomial::one(field, 0);
        let antipode = h.parse(&format!("z^{}", n - 1)).unwrap();
        let hopf = HopfData::new(h, vec![comul], vec![counit], vec![antipode], &budget()).unwrap();
        let c_names: Vec<String> = vec!["x".into(), "z".into()];
        let rho = crate::parse::parse_polynomial("x * z", field, &c_names).unwrap();
        action_from_coaction(&b, hopf, vec![rho], &budget()).unwrap()
    }

    pub(crate) fn alpha_p_groupoid(p: u64) -> GroupoidPresentation {
        let field = Field::prime(p).unwrap();
        let b = ring(field, &["x"], &[]);
        let h = ring(field, &["a"], &[&format!("a^{p}")]);
        let square_names: Vec<String> = vec!["a".into(), "a'".into()];
        let comul = crate::parse::parse_polynomial("a + a'", field, &square_names).unwrap();
        let counit = Polynomial::zero(field, 0);
        let antipode = h.parse("-a").unwrap();
        let hopf = HopfData::new(h, vec![comul], vec![counit], vec![antipode], &budget()).unwrap();
        // t*(x) = x/(1 + a x) expanded by nilpotency of a
        let c_names: Vec<String> = vec!["x".into(), "a".into()];
        let mut src = String::from("x");
        for i in 1..p {
            let sign = if i % 2 == 1 { "-" } else { "+" };
            src.push_str(&format!(" {sign} a^{i}*x^{}", i + 1));
        }
        let rho = crate::parse::parse_polynomial(&src, field, &c_names).unwrap();
        action_from_coaction(&b, hopf, vec![rho], &budget()).unwrap()
    }

    pub(crate) fn symmetric_two_groupoid(field: Field) -> GroupoidPresentation {
        let b = ring(field, &["x1", "x2"], &[]);
        let swap = RingMap::new(
            b.clone(),
            b.clone(),
            vec![b.variable(1), b.variable(0)],
            &budget(),
        )
        .unwrap();
        action_from_automorphisms(&b, &[swap], 1024, &budget()).unwrap()
    }

    #[test]
    fn mu2_complexity_one() {
        let g = mu_n_groupoid(Field::Rationals, 2);
        let inv = g.base.parse("x^2").unwrap();
        let report = complexity(&g, &[inv], &SequenceConfig::default()).unwrap();
        assert!(report.dominant);
        assert_eq!(report.complexity, ComplexityVerdict::Exactly(1));
        assert!(!report.stabilizer.trivial);
    }

    #[test]
    fn mu3_complexity_two() {
        let g = mu_n_groupoid(Field::Rationals, 3);
        let inv = g.base.parse("x^3").unwrap();
        let report = complexity(&g, &[inv], &SequenceConfig::default()).unwrap();
        assert_eq!(report.complexity, ComplexityVerdict::Exactly(2));
        // stage 1 is spanned by 1, x, x z, x z^2; its full relation ideal is
        // generated by the circulant minors, of which the classical pair
        // y1*y2 - x^2, y2^2 - x*y1 together with y1^3 - x^3 generate a
        // strictly smaller (still homogeneous) subideal
        let seq = report.sequence.as_ref().unwrap();
        let stage1 = &seq.stages[1];
        assert_eq!(stage1.presentation.vars(), 3);
        let kernel = ring(
            Field::Rationals,
            &["x", "y1", "y2"],
            &["y1^2 - x*y2", "x*y1 - y2^2", "x^2 - y1*y2"],
        );
        assert!(
            crate::rings::ideal_equal(&stage1.presentation, &kernel, &[0, 1, 2]).unwrap()
        );
        for src in ["y1^3 - x^3", "y1*y2 - x^2", "y2^2 - x*y1"] {
            let rel = kernel.parse(src).unwrap();
            let aligned = rel.map_vars(3, &[0, 1, 2]);
            assert!(stage1.presentation.contains(&aligned));
        }
    }

    #[test]
    fn fat_point_not_dominant() {
        let field = Field::Rationals;
        let b = ring(field, &["x"], &["x^2"]);
        let h = ring(field, &["z"], &["z^2 - 1"]);
        let square_names: Vec<String> = vec!["z".into(), "z'".into()];
        let comul = crate::parse::parse_polynomial("z * z'", field, &square_names).unwrap();
        let hopf = HopfData::new(
            h.clone(),
            vec![comul],
            vec![Polynomial::one(field, 0)],
            vec![h.parse("z").unwrap()],
            &budget(),
        )
        .unwrap();
        let c_names: Vec<String> = vec!["x".into(), "z".into()];
        let rho = crate::parse::parse_polynomial("x * z", field, &c_names).unwrap();
        let g = action_from_coaction(&b, hopf, vec![rho], &budget()).unwrap();
        let inv = g.base.parse("x^2").unwrap();
        let report = complexity(&g, &[inv], &SequenceConfig::default()).unwrap();
        assert!(!report.dominant);
        assert!(matches!(
            report.complexity,
            ComplexityVerdict::Undefined { .. }
        ));
        let w = report.dominance_witness.unwrap();
        // the witness is nonzero in the fiber square
        assert!(!report.fiber_square.contains(&w));
    }

    #[test]
    fn alpha2_stabilizer_presentation() {
        let g = alpha_p_groupoid(2);
        let report = stabilizer(&g, &SaturationLimits::default(), &budget()).unwrap();
        let field = Field::prime(2).unwrap();
        let expected = ring(field, &["x", "a"], &["a^2", "a*x^2"]);
        assert!(crate::rings::ideal_equal(&report.ring, &expected, &[0, 1]).unwrap());
        assert!(!report.trivial);
    }

    #[test]
    fn s2_invariants_verified() {
        let g = symmetric_two_groupoid(Field::Rationals);
        let e1 = g.base.parse("x1 + x2").unwrap();
        let e2 = g.base.parse("x1 * x2").unwrap();
        let x1 = g.base.parse("x1").unwrap();
        let flags = verify_invariants(&g, &[e1, e2, x1]);
        assert_eq!(flags, vec![true, true, false]);
    }

    #[test]
    fn non_group_rejected() {
        let b = ring(Field::Rationals, &["x"], &[]);
        let shift = RingMap::new(
            b.clone(),
            b.clone(),
            vec![b.parse("x + 1").unwrap()],
            &budget(),
        )
        .unwrap();
        let err = close_group(&b, &[shift], 64).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)));
    }

    #[test]
    fn identity_action_trivial_groupoid() {
        let b = ring(Field::Rationals, &["x"], &[]);
        let g = action_from_automorphisms(&b, &[], 16, &budget()).unwrap();
        match &g.origin {
            GroupOrigin::ConstantGroup { elements, .. } => assert_eq!(elements.len(), 1),
            _ => unreachable!(),
        }
        let stab = stabilizer(&g, &SaturationLimits::default(), &budget()).unwrap();
        assert!(stab.trivial);
    }

    #[test]
    fn s2_stabilizer_presentation() {
        // the stabilizer splits into one factor per group element, cut out
        // by identifying each coordinate with its permuted image
        let g = symmetric_two_groupoid(Field::Rationals);
        let report = stabilizer(&g, &SaturationLimits::default(), &budget()).unwrap();
        let expected = ring(
            Field::Rationals,
            &["x1", "x2", "u"],
            &["u^2 - u", "(x1 - x2)*u"],
        );
        assert!(crate::rings::ideal_equal(&report.ring, &expected, &[0, 1, 2]).unwrap());
        assert!(!report.trivial);
    }

    #[test]
    fn trivial_coaction_stabilizer_is_whole_group() {
        // when the coaction is trivial the stabilizer is the full group
        // scheme over the base
        let field = Field::Rationals;
        let b = ring(field, &["x"], &[]);
        let h = ring(field, &["z"], &["z^2 - 1"]);
        let square_names: Vec<String> = vec!["z".into(), "z'".into()];
        let comul = crate::parse::parse_polynomial("z * z'", field, &square_names).unwrap();
        let hopf = HopfData::new(
            h.clone(),
            vec![comul],
            vec![Polynomial::one(field, 0)],
            vec![h.parse("z").unwrap()],
            &budget(),
        )
        .unwrap();
        let c_names: Vec<String> = vec!["x".into(), "z".into()];
        let rho = crate::parse::parse_polynomial("x", field, &c_names).unwrap();
        let g = action_from_coaction(&b, hopf, vec![rho], &budget()).unwrap();
        let report = stabilizer(&g, &SaturationLimits::default(), &budget()).unwrap();
        assert_eq!(report.ring, g.arrows);
        assert!(!report.trivial);
        assert_eq!(report.certificate.unwrap().generators.len(), 2);
    }

    fn free_sign_action() -> (PresentedRing, GroupoidPresentation) {
        // sign action on the hyperbola x y = 1 is free
        let b = ring(Field::Rationals, &["x", "y"], &["x*y - 1"]);
        let neg = RingMap::new(
            b.clone(),
            b.clone(),
            vec![b.parse("-x").unwrap(), b.parse("-y").unwrap()],
            &budget(),
        )
        .unwrap();
        let g = action_from_automorphisms(&b, &[neg], 1024, &budget()).unwrap();
        (b, g)
    }

    #[test]
    fn free_action_has_trivial_stabilizer_and_complexity_zero() {
        let (b, g) = free_sign_action();
        let stab = stabilizer(&g, &SaturationLimits::default(), &budget()).unwrap();
        assert!(stab.trivial);
        let invs = vec![b.parse("x^2").unwrap(), b.parse("y^2").unwrap()];
        let report = complexity(&g, &invs, &SequenceConfig::default()).unwrap();
        assert_eq!(report.complexity, ComplexityVerdict::Exactly(0));
    }

    #[test]
    fn fixed_points_force_positive_complexity() {
        // the scaling action fixes the origin: nontrivial stabilizer and
        // complexity at least one
        let g = mu_n_groupoid(Field::Rationals, 2);
        let stab = stabilizer(&g, &SaturationLimits::default(), &budget()).unwrap();
        assert!(!stab.trivial);
        let inv = g.base.parse("x^2").unwrap();
        let report = complexity(&g, &[inv], &SequenceConfig::default()).unwrap();
        match report.complexity {
            ComplexityVerdict::Exactly(n) => assert!(n >= 1),
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn complexity_stable_under_invariant_presentation_noise() {
        let g = symmetric_two_groupoid(Field::Rationals);
        let e1 = g.base.parse("x1 + x2").unwrap();
        let e2 = g.base.parse("x1 * x2").unwrap();
        let redundant = g.base.parse("(x1 + x2) * (x1 + x2)").unwrap();
        let base_report =
            complexity(&g, &[e1.clone(), e2.clone()], &SequenceConfig::default()).unwrap();
        let permuted =
            complexity(&g, &[e2.clone(), e1.clone()], &SequenceConfig::default()).unwrap();
        let augmented = complexity(
            &g,
            &[e1.clone(), e2.clone(), redundant],
            &SequenceConfig::default(),
        )
        .unwrap();
        assert_eq!(base_report.complexity, permuted.complexity);
        assert_eq!(base_report.complexity, augmented.complexity);
        // stage presentations agree under the identity alignment: the stage
        // generator lists do not depend on how the invariant subring is
        // presented, only on its image
        let stages = |r: &ComplexityReport| -> Vec<PresentedRing> {
            r.sequence
                .as_ref()
                .unwrap()
                .stages
                .iter()
                .map(|s| s.presentation.clone())
                .collect()
        };
        for (s1, s2) in stages(&base_report).iter().zip(stages(&permuted).iter()) {
            assert_eq!(s1.vars(), s2.vars());
            let id: Vec<usize> = (0..s1.vars()).collect();
            assert!(crate::rings::ideal_equal(s1, s2, &id).unwrap());
        }
        for (s1, s2) in stages(&base_report).iter().zip(stages(&augmented).iter()) {
            assert_eq!(s1.vars(), s2.vars());
            let id: Vec<usize> = (0..s1.vars()).collect();
            assert!(crate::rings::ideal_equal(s1, s2, &id).unwrap());
        }
    }

    #[test]
    fn reynolds_for_s2() {
        let b = ring(Field::Rationals, &["x1", "x2"], &[]);
        let swap = RingMap::new(
            b.clone(),
            b.clone(),
            vec![b.variable(1), b.variable(0)],
            &budget(),
        )
        .unwrap();
        let elements = close_group(&b, &[swap], 16).unwrap();
        let gens = reynolds_invariant_generators(&b, &elements, 2, &budget()).unwrap();
        assert_eq!(gens.len(), 2);
        // the generated subalgebra equals k[x1+x2, x1*x2]
        let e1 = b.parse("x1 + x2").unwrap();
        let e2 = b.parse("x1 * x2").unwrap();
        let names: Vec<String> = vec!["w1".into(), "w2".into()];
        let free = PresentedRing::free(Field::Rationals, names);
        let marking = RingMap::new(free, b.clone(), gens.clone(), &budget()).unwrap();
        let graph = GraphRing::new(&marking, &budget()).unwrap();
        let engine = graph.span_engine(&[b.one()], &budget()).unwrap();
        for target in [&e1, &e2] {
            assert!(graph.member_of_span(&engine, target).unwrap().is_some());
        }
    }

    #[test]
    fn reynolds_sign_action() {
        let b = ring(Field::Rationals, &["x"], &[]);
        let neg = RingMap::new(b.clone(), b.clone(), vec![b.parse("-x").unwrap()], &budget())
            .unwrap();
        let elements = close_group(&b, &[neg], 16).unwrap();
        let gens = reynolds_invariant_generators(&b, &elements, 2, &budget()).unwrap();
        assert_eq!(gens, vec![b.parse("x^2").unwrap()]);
    }

    #[test]
    fn modular_case_refused() {
        let field = Field::prime(2).unwrap();
        let b = ring(field, &["x1", "x2"], &[]);
        let swap = RingMap::new(
            b.clone(),
            b.clone(),
            vec![b.variable(1), b.variable(0)],
            &budget(),
        )
        .unwrap();
        let elements = close_group(&b, &[swap], 16).unwrap();
        let err = reynolds_invariant_generators(&b, &elements, 2, &budget()).unwrap_err();
        assert!(matches!(err, Error::ModularCase));
    }

    #[test]
    fn hopf_axiom_failure_detected() {
        // -1 is a well-defined map to the ground field but violates the
        // counit law for the grouplike comultiplication
        let field = Field::Rationals;
        let h = ring(field, &["z"], &["z^2 - 1"]);
        let square_names: Vec<String> = vec!["z".into(), "z'".into()];
        let comul = crate::parse::parse_polynomial("z * z'", field, &square_names).unwrap();
        let err = HopfData::new(
            h.clone(),
            vec![comul],
            vec![Polynomial::constant(field, 0, field.from_i64(-1))],
            vec![h.parse("z").unwrap()],
            &budget(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::HopfAxiomFailure { axiom: "counit", .. }));
    }

    #[test]
    fn coaction_axiom_failure_detected() {
        // sending x to z is not counital
        let field = Field::Rationals;
        let b = ring(field, &["x"], &[]);
        let h = ring(field, &["z"], &["z^2 - 1"]);
        let square_names: Vec<String> = vec!["z".into(), "z'".into()];
        let comul = crate::parse::parse_polynomial("z * z'", field, &square_names).unwrap();
        let hopf = HopfData::new(
            h.clone(),
            vec![comul],
            vec![Polynomial::one(field, 0)],
            vec![h.parse("z").unwrap()],
            &budget(),
        )
        .unwrap();
        let c_names: Vec<String> = vec!["x".into(), "z".into()];
        let bogus = crate::parse::parse_polynomial("z", field, &c_names).unwrap();
        let err = action_from_coaction(&b, hopf, vec![bogus], &budget()).unwrap_err();
        assert!(matches!(
            err,
            Error::CoactionAxiomFailure { axiom: "counit", .. }
        ));
    }

    #[test]
    fn trivial_coaction_accepted() {
        let field = Field::Rationals;
        let b = ring(field, &["x"], &[]);
        let h = ring(field, &["z"], &["z^2 - 1"]);
        let square_names: Vec<String> = vec!["z".into(), "z'".into()];
        let comul = crate::parse::parse_polynomial("z * z'", field, &square_names).unwrap();
        let hopf = HopfData::new(
            h.clone(),
            vec![comul],
            vec![Polynomial::one(field, 0)],
            vec![h.parse("z").unwrap()],
            &budget(),
        )
        .unwrap();
        let c_names: Vec<String> = vec!["x".into(), "z".into()];
        let rho = crate::parse::parse_polynomial("x", field, &c_names).unwrap();
        let g = action_from_coaction(&b, hopf, vec![rho], &budget()).unwrap();
        // trivial action: source equals target
        assert!(g.source_map.maps_equal(&g.target_map));
    }

    #[test]
    fn projection_replay_constant_group() {
        let g = symmetric_two_groupoid(Field::Rationals);
        let GroupOrigin::ConstantGroup {
            elements,
            projections,
            ..
        } = &g.origin
        else {
            unreachable!()
        };
        for (sig, proj) in elements.iter().zip(projections) {
            // proj ∘ t* = σ and proj ∘ s* = id
            let t_then = g.target_map.compose(proj).unwrap();
            assert!(t_then.maps_equal(sig));
            let s_then = g.source_map.compose(proj).unwrap();
            assert!(s_then.maps_equal(&RingMap::identity(&g.base)));
        }
    }
}
