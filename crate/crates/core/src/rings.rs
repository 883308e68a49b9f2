//! Finitely presented algebras and the constructions on them: ring maps,
//! tensor products over a base, kernels, subalgebra presentations and
//! finiteness certificates.
//!
//! A presented ring stores its defining ideal as the reduced degrevlex
//! Gröbner basis, so two presentations are equal exactly when their variable
//! lists and bases coincide, and normal forms give canonical representatives
//! of elements.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{
    elimination_basis, groebner_basis, normal_form, Budget, GroebnerBasis,
};
use crate::modules::ModuleVector;
use crate::monomial::MonomialOrder;
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::span::SpanEngine;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentedRing {
    field: Field,
    var_names: Vec<String>,
    ideal: GroebnerBasis,
}

impl PresentedRing {
    /// Presentation from raw relations; the defining ideal is stored reduced.
    pub fn new(
        field: Field,
        var_names: Vec<String>,
        relations: &[Polynomial],
        budget: &Budget,
    ) -> Result<PresentedRing> {
        let vars = var_names.len();
        for r in relations {
            assert_eq!(r.vars(), vars, "relation arity mismatch");
            assert_eq!(r.field(), field, "relation field mismatch");
        }
        let order = MonomialOrder::degrevlex(vars);
        let ideal = groebner_basis(field, relations, &order, budget)?;
        Ok(PresentedRing {
            field,
            var_names,
            ideal,
        })
    }

    /// Free polynomial ring.
    pub fn free(field: Field, var_names: Vec<String>) -> PresentedRing {
        let vars = var_names.len();
        PresentedRing {
            field,
            var_names,
            ideal: GroebnerBasis::from_reduced_parts(
                MonomialOrder::degrevlex(vars),
                field,
                vars,
                Vec::new(),
            ),
        }
    }

    /// The base field as a ring with no variables.
    pub fn ground(field: Field) -> PresentedRing {
        PresentedRing::free(field, Vec::new())
    }

    pub(crate) fn from_reduced_ideal(
        field: Field,
        var_names: Vec<String>,
        ideal: GroebnerBasis,
    ) -> PresentedRing {
        assert_eq!(ideal.vars(), var_names.len());
        PresentedRing {
            field,
            var_names,
            ideal,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn ideal(&self) -> &GroebnerBasis {
        &self.ideal
    }

    pub fn relations(&self) -> &[Polynomial] {
        self.ideal.generators()
    }

    /// The ring is zero exactly when the reduced basis is {1}.
    pub fn is_zero_ring(&self) -> bool {
        self.ideal.is_trivial_ideal()
    }

    /// Canonical representative of an element.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.ideal)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field, self.vars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.field, self.vars())
    }

    pub fn variable(&self, i: usize) -> Polynomial {
        Polynomial::variable(self.field, self.vars(), i)
    }

    /// Parse an element in this ring's variables.
    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        parse_polynomial(src, self.field, &self.var_names)
    }

    pub fn render(&self, p: &Polynomial) -> String {
        format!("{}", p.display(&self.var_names))
    }
}

/// A map of presented rings, given by images of the source variables.
/// Well-definedness (each defining relation dies in the target) is checked
/// at construction.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: PresentedRing,
    target: PresentedRing,
    images: Vec<Polynomial>,
}

impl RingMap {
    pub fn new(
        source: PresentedRing,
        target: PresentedRing,
        images: Vec<Polynomial>,
        _budget: &Budget,
    ) -> Result<RingMap> {
        assert_eq!(images.len(), source.vars(), "one image per source variable");
        for im in &images {
            assert_eq!(im.vars(), target.vars(), "image ambient mismatch");
            assert_eq!(im.field(), target.field(), "image field mismatch");
        }
        assert_eq!(source.field(), target.field(), "field mismatch");
        let map = RingMap {
            source,
            target,
            images,
        };
        for (index, rel) in map.source.relations().iter().enumerate() {
            let image = map.apply_raw(rel);
            if !map.target.contains(&image) {
                return Err(Error::MapNotWellDefined { index });
            }
        }
        Ok(map)
    }

    pub fn identity(ring: &PresentedRing) -> RingMap {
        let images = (0..ring.vars()).map(|i| ring.variable(i)).collect();
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    /// The unique map from the ground field.
    pub fn from_ground(target: &PresentedRing) -> RingMap {
        RingMap {
            source: PresentedRing::ground(target.field()),
            target: target.clone(),
            images: Vec::new(),
        }
    }

    pub fn source(&self) -> &PresentedRing {
        &self.source
    }

    pub fn target(&self) -> &PresentedRing {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    fn apply_raw(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.images, self.target.field(), self.target.vars())
    }

    /// Image of an element, as a canonical representative in the target.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        self.target.normal_form(&self.apply_raw(p))
    }

    pub fn compose(&self, then: &RingMap) -> Result<RingMap> {
        if self.target != then.source {
            return Err(Error::AmbientMismatch(
                "composition endpoints do not match".into(),
            ));
        }
        let images = self.images.iter().map(|im| then.apply(im)).collect();
        Ok(RingMap {
            source: self.source.clone(),
            target: then.target.clone(),
            images,
        })
    }

    pub fn maps_equal(&self, other: &RingMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| self.target.contains(&a.sub(b)))
    }
}

/// Kernel of a ring map as a reduced basis in the source ambient (contains
/// the source's defining ideal). Computed by eliminating the target block
/// from the graph ideal.
pub fn ring_map_kernel(f: &RingMap, budget: &Budget) -> Result<GroebnerBasis> {
    let nt = f.target().vars();
    let ns = f.source().vars();
    let total = nt + ns;
    let field = f.target().field();
    let mut gens: Vec<Polynomial> = Vec::new();
    let target_embed: Vec<usize> = (0..nt).collect();
    for rel in f.target().relations() {
        gens.push(rel.map_vars(total, &target_embed));
    }
    for (j, im) in f.images().iter().enumerate() {
        let u = Polynomial::variable(field, total, nt + j);
        gens.push(u.sub(&im.map_vars(total, &target_embed)));
    }
    elimination_basis(&gens, field, total, nt, budget)
}

/// Schematic dominance at ring level: the map is injective iff the kernel
/// reduces into the source's defining ideal. Returns a witness otherwise.
pub fn dominance(f: &RingMap, budget: &Budget) -> Result<(bool, Option<Polynomial>)> {
    let kernel = ring_map_kernel(f, budget)?;
    for g in kernel.generators() {
        let nf = f.source().normal_form(g);
        if !nf.is_zero() {
            return Ok((false, Some(nf)));
        }
    }
    Ok((true, None))
}

/// A tensor product over a common base, with the two insertions.
#[derive(Debug, Clone)]
pub struct TensorRing {
    pub ring: PresentedRing,
    pub left: RingMap,
    pub right: RingMap,
}

fn freshen(used: &mut Vec<String>, name: &str) -> String {
    let mut candidate = name.to_string();
    while used.iter().any(|n| n == &candidate) {
        candidate.push('\'');
    }
    used.push(candidate.clone());
    candidate
}

/// Variable names of a tensor product: the left factor's names followed by
/// the right factor's, priming right-factor names that collide. This is the
/// naming scheme `tensor_over_base` uses.
pub fn tensor_variable_names(left: &[String], right: &[String]) -> Vec<String> {
    let mut names: Vec<String> = left.to_vec();
    let mut used = names.clone();
    for n in right {
        let fresh = freshen(&mut used, n);
        names.push(fresh);
    }
    names
}

/// `C1 ⊗_D C2` for two maps out of the same base `D`, presented on the
/// disjoint union of the factor variables, with the base glued by equating
/// the two images of each base variable. Second-factor names are primed on
/// collision.
pub fn tensor_over_base(f: &RingMap, g: &RingMap, budget: &Budget) -> Result<TensorRing> {
    if f.source() != g.source() {
        return Err(Error::AmbientMismatch(
            "tensor factors must share the base".into(),
        ));
    }
    let field = f.target().field();
    let n1 = f.target().vars();
    let n2 = g.target().vars();
    let total = n1 + n2;
    let names = tensor_variable_names(f.target().var_names(), g.target().var_names());
    let left_embed: Vec<usize> = (0..n1).collect();
    let right_embed: Vec<usize> = (n1..total).collect();
    let mut rels: Vec<Polynomial> = Vec::new();
    for r in f.target().relations() {
        rels.push(r.map_vars(total, &left_embed));
    }
    for r in g.target().relations() {
        rels.push(r.map_vars(total, &right_embed));
    }
    for j in 0..f.source().vars() {
        let a = f.images()[j].map_vars(total, &left_embed);
        let b = g.images()[j].map_vars(total, &right_embed);
        rels.push(a.sub(&b));
    }
    let ring = PresentedRing::new(field, names, &rels, budget)?;
    let left = RingMap::new(
        f.target().clone(),
        ring.clone(),
        (0..n1)
            .map(|i| ring.normal_form(&Polynomial::variable(field, total, i)))
            .collect(),
        budget,
    )?;
    let right = RingMap::new(
        g.target().clone(),
        ring.clone(),
        (0..n2)
            .map(|i| ring.normal_form(&Polynomial::variable(field, total, n1 + i)))
            .collect(),
        budget,
    )?;
    Ok(TensorRing { ring, left, right })
}

/// Abstract presentation of the subalgebra generated by `gens` inside
/// `ambient`: one fresh variable per generator, relations = kernel of the
/// evaluation map, computed by elimination. Returns the presentation and the
/// evaluation map onto the subalgebra.
pub fn subalgebra_presentation(
    ambient: &PresentedRing,
    gens: &[Polynomial],
    names: &[String],
    budget: &Budget,
) -> Result<(PresentedRing, RingMap)> {
    assert!(!gens.is_empty(), "at least one generator required");
    assert_eq!(gens.len(), names.len(), "one name per generator");
    let field = ambient.field();
    let na = ambient.vars();
    let m = gens.len();
    let total = na + m;
    let embed: Vec<usize> = (0..na).collect();
    let mut rels: Vec<Polynomial> = Vec::new();
    for r in ambient.relations() {
        rels.push(r.map_vars(total, &embed));
    }
    for (j, g) in gens.iter().enumerate() {
        assert_eq!(g.vars(), na, "generator ambient mismatch");
        let u = Polynomial::variable(field, total, na + j);
        rels.push(u.sub(&g.map_vars(total, &embed)));
    }
    let kernel = elimination_basis(&rels, field, total, na, budget)?;
    let pres = PresentedRing::from_reduced_ideal(field, names.to_vec(), kernel);
    let onto = RingMap::new(
        pres.clone(),
        ambient.clone(),
        gens.iter().map(|g| ambient.normal_form(g)).collect(),
        budget,
    )?;
    Ok((pres, onto))
}

/// Decide whether two presentations on aligned variables carve out the same
/// ideal. `correspondence[i]` is the variable of `r2` matching variable `i`
/// of `r1`; mutual normal-form containment is checked.
pub fn ideal_equal(
    r1: &PresentedRing,
    r2: &PresentedRing,
    correspondence: &[usize],
) -> Result<bool> {
    if r1.field() != r2.field() || r1.vars() != r2.vars() {
        return Err(Error::AmbientMismatch(
            "presentations must share field and variable count".into(),
        ));
    }
    assert_eq!(correspondence.len(), r1.vars());
    let mut seen = vec![false; r2.vars()];
    for &c in correspondence {
        assert!(c < r2.vars() && !seen[c], "correspondence must be a bijection");
        seen[c] = true;
    }
    let mut inverse = vec![0usize; r2.vars()];
    for (i, &c) in correspondence.iter().enumerate() {
        inverse[c] = i;
    }
    for g in r1.relations() {
        if !r2.contains(&g.map_vars(r2.vars(), correspondence)) {
            return Ok(false);
        }
    }
    for g in r2.relations() {
        if !r1.contains(&g.map_vars(r1.vars(), &inverse)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The graph of a ring map: ambient `k[x, w]` where `x` presents the target
/// and `w_j - image_j` records the map, with the reduced basis under the
/// block order eliminating `x`. Shared by span computations and kernels.
pub struct GraphRing {
    pub field: Field,
    pub x_vars: usize,
    pub w_vars: usize,
    pub gb: GroebnerBasis,
}

impl GraphRing {
    pub fn new(f: &RingMap, budget: &Budget) -> Result<GraphRing> {
        let field = f.target().field();
        let nx = f.target().vars();
        let nw = f.source().vars();
        let total = nx + nw;
        let embed: Vec<usize> = (0..nx).collect();
        let mut gens: Vec<Polynomial> = Vec::new();
        for r in f.target().relations() {
            gens.push(r.map_vars(total, &embed));
        }
        for (j, im) in f.images().iter().enumerate() {
            let w = Polynomial::variable(field, total, nx + j);
            gens.push(w.sub(&im.map_vars(total, &embed)));
        }
        let order = MonomialOrder::elimination(nx, nw);
        let gb = groebner_basis(field, &gens, &order, budget)?;
        Ok(GraphRing {
            field,
            x_vars: nx,
            w_vars: nw,
            gb,
        })
    }

    pub fn embed_target(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.x_vars).collect();
        p.map_vars(self.x_vars + self.w_vars, &map)
    }

    /// Span engine for rank-1 targets living in the mapped-to ring.
    pub fn span_engine(&self, targets: &[Polynomial], budget: &Budget) -> Result<SpanEngine> {
        let vectors: Vec<ModuleVector> = targets
            .iter()
            .map(|t| ModuleVector::new(vec![self.embed_target(t)]))
            .collect();
        SpanEngine::new(&self.gb, self.x_vars, &vectors, budget)
    }

    pub fn member_of_span(
        &self,
        engine: &SpanEngine,
        candidate: &Polynomial,
    ) -> Result<Option<Vec<Polynomial>>> {
        engine.membership(&ModuleVector::new(vec![self.embed_target(candidate)]))
    }
}

/// Module generators of the target over the source image, with replayable
/// closure witnesses.
#[derive(Debug, Clone)]
pub struct FinitenessCertificate {
    /// Always starts with 1; entries are canonical representatives.
    pub generators: Vec<Polynomial>,
    /// `witnesses[v][g]` expresses `variable_v · generators[g]` over the
    /// generators, coefficients in the source ambient.
    pub witnesses: Vec<Vec<Vec<Polynomial>>>,
}

/// Caps for span saturation.
#[derive(Debug, Clone, Copy)]
pub struct SaturationLimits {
    pub max_rounds: u64,
    pub max_generators: u64,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits {
            max_rounds: 64,
            max_generators: 4096,
        }
    }
}

/// Saturate the span of {1} under multiplication by the target's variables,
/// certifying that the target is a finite module over the image of the map.
pub fn finiteness_certificate(
    f: &RingMap,
    limits: &SaturationLimits,
    budget: &Budget,
) -> Result<FinitenessCertificate> {
    let graph = GraphRing::new(f, budget)?;
    let target = f.target();
    let mut gens: Vec<Polynomial> = vec![target.one()];
    let mut engine = graph.span_engine(&gens, budget)?;
    let mut round = 0u64;
    loop {
        round += 1;
        if round > limits.max_rounds {
            return Err(Error::NotFinite {
                cap: "rounds",
                limit: limits.max_rounds,
            });
        }
        let mut added = false;
        let mut gi = 0;
        while gi < gens.len() {
            for v in 0..target.vars() {
                let product = target.normal_form(&target.variable(v).mul(&gens[gi]));
                if graph.member_of_span(&engine, &product)?.is_none() {
                    gens.push(product);
                    if gens.len() as u64 > limits.max_generators {
                        return Err(Error::NotFinite {
                            cap: "generators",
                            limit: limits.max_generators,
                        });
                    }
                    engine = graph.span_engine(&gens, budget)?;
                    added = true;
                }
            }
            gi += 1;
        }
        if !added {
            break;
        }
    }
    // closure witnesses from the final engine
    let mut witnesses = Vec::with_capacity(target.vars());
    for v in 0..target.vars() {
        let mut per_gen = Vec::with_capacity(gens.len());
        for g in &gens {
            let product = target.normal_form(&target.variable(v).mul(g));
            let row = graph
                .member_of_span(&engine, &product)?
                .ok_or_else(|| Error::Internal("closure witness vanished".into()))?;
            per_gen.push(row);
        }
        witnesses.push(per_gen);
    }
    Ok(FinitenessCertificate {
        generators: gens,
        witnesses,
    })
}

impl FinitenessCertificate {
    /// Certificate from a set already known to span (the span of a stage of a
    /// canonical sequence is a ring, hence closed); witnesses are recomputed
    /// and verified when `verify` is set.
    pub fn from_spanning_set(
        f: &RingMap,
        generators: Vec<Polynomial>,
        verify: bool,
        budget: &Budget,
    ) -> Result<FinitenessCertificate> {
        let target = f.target();
        let gens: Vec<Polynomial> = generators.iter().map(|g| target.normal_form(g)).collect();
        if gens.first().map(|g| !g.is_one()).unwrap_or(true) {
            return Err(Error::CertificateInvalid(
                "generator list must start with 1".into(),
            ));
        }
        if !verify {
            return Ok(FinitenessCertificate {
                generators: gens,
                witnesses: Vec::new(),
            });
        }
        let graph = GraphRing::new(f, budget)?;
        let engine = graph.span_engine(&gens, budget)?;
        let mut witnesses = Vec::with_capacity(target.vars());
        for v in 0..target.vars() {
            let mut per_gen = Vec::with_capacity(gens.len());
            for g in &gens {
                let product = target.normal_form(&target.variable(v).mul(g));
                let row = graph.member_of_span(&engine, &product)?.ok_or_else(|| {
                    Error::CertificateInvalid(format!(
                        "variable {v} times a generator escapes the span"
                    ))
                })?;
                per_gen.push(row);
            }
            witnesses.push(per_gen);
        }
        Ok(FinitenessCertificate {
            generators: gens,
            witnesses,
        })
    }

    /// Re-verify every closure witness by exact normal forms.
    pub fn replay(&self, f: &RingMap) -> Result<()> {
        let target = f.target();
        if self.generators.first().map(|g| !g.is_one()).unwrap_or(true) {
            return Err(Error::CertificateInvalid(
                "generator list must start with 1".into(),
            ));
        }
        for (v, per_gen) in self.witnesses.iter().enumerate() {
            for (g, row) in per_gen.iter().enumerate() {
                let mut acc = target.zero();
                for (h, gen) in row.iter().zip(&self.generators) {
                    let h_img = f.apply(h);
                    acc = acc.add(&h_img.mul(gen));
                }
                let lhs = target.variable(v).mul(&self.generators[g]);
                if !target.contains(&lhs.sub(&acc)) {
                    return Err(Error::CertificateInvalid(format!(
                        "witness for variable {v}, generator {g} fails to replay"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::default()
    }

    fn ring(field: Field, names: &[&str], rels: &[&str]) -> PresentedRing {
        let name_list: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let polys: Vec<Polynomial> = rels
            .iter()
            .map(|src| parse_polynomial(src, field, &name_list).unwrap())
            .collect();
        PresentedRing::new(field, name_list, &polys, &budget()).unwrap()
    }

    #[test]
    fn cusp_kernel() {
        // k[x,y] -> k[t], x -> t^3, y -> t^4 has kernel (y^3 - x^4)
        let a = ring(Field::Rationals, &["x", "y"], &[]);
        let b = ring(Field::Rationals, &["t"], &[]);
        let f = RingMap::new(
            a.clone(),
            b.clone(),
            vec![b.parse("t^3").unwrap(), b.parse("t^4").unwrap()],
            &budget(),
        )
        .unwrap();
        let kernel = ring_map_kernel(&f, &budget()).unwrap();
        let expected = ring(Field::Rationals, &["x", "y"], &["y^3 - x^4"]);
        assert_eq!(kernel.generators(), expected.relations());
        let (dom, _) = dominance(&f, &budget()).unwrap();
        assert!(!dom); // the polynomial ring k[x,y] does not inject
    }

    #[test]
    fn identity_map_kernel_trivial() {
        let a = ring(Field::Rationals, &["x", "y"], &["y^3 - x^4"]);
        let f = RingMap::identity(&a);
        let kernel = ring_map_kernel(&f, &budget()).unwrap();
        for g in kernel.generators() {
            assert!(a.contains(g));
        }
        let (dom, w) = dominance(&f, &budget()).unwrap();
        assert!(dom);
        assert!(w.is_none());
    }

    #[test]
    fn fat_point_kernel_witness() {
        // k[x1,x2]/(x1^2, x2^2) -> k[x,z]/(x^2, z^n - 1), x1 -> x, x2 -> z*x
        let d = ring(Field::Rationals, &["x1", "x2"], &["x1^2", "x2^2"]);
        let c = ring(Field::Rationals, &["x", "z"], &["x^2", "z^3 - 1"]);
        let f = RingMap::new(
            d.clone(),
            c.clone(),
            vec![c.parse("x").unwrap(), c.parse("z*x").unwrap()],
            &budget(),
        )
        .unwrap();
        let kernel = ring_map_kernel(&f, &budget()).unwrap();
        let x1x2 = d.parse("x1*x2").unwrap();
        let in_kernel = kernel
            .generators()
            .iter()
            .any(|g| !d.contains(g));
        assert!(in_kernel);
        // x1*x2 is in the kernel but not in the defining ideal
        let nf_mod_kernel = normal_form(&x1x2, &kernel);
        assert!(nf_mod_kernel.is_zero());
        assert!(!d.contains(&x1x2));
        let (dom, witness) = dominance(&f, &budget()).unwrap();
        assert!(!dom);
        let w = witness.unwrap();
        assert!(!d.contains(&w));
    }

    #[test]
    fn tensor_of_cusp_normalization() {
        // B ⊗_A B for A = k[t^3, t^4] ⊂ B = k[t]
        let b = ring(Field::Rationals, &["t"], &[]);
        let (a, a_to_b) = subalgebra_presentation(
            &b,
            &[b.parse("t^3").unwrap(), b.parse("t^4").unwrap()],
            &["x".to_string(), "y".to_string()],
            &budget(),
        )
        .unwrap();
        // presentation of A is the cusp
        let expected = ring(Field::Rationals, &["x", "y"], &["y^3 - x^4"]);
        assert!(ideal_equal(&a, &expected, &[0, 1]).unwrap());
        let tensor = tensor_over_base(&a_to_b, &a_to_b, &budget()).unwrap();
        let expected_t = ring(
            Field::Rationals,
            &["t", "t'"],
            &["t^3 - t'^3", "t^4 - t'^4"],
        );
        assert_eq!(tensor.ring, expected_t);
        // insertions send t to the two copies
        assert_eq!(
            tensor.left.apply(&b.parse("t").unwrap()),
            tensor.ring.parse("t").unwrap()
        );
        assert_eq!(
            tensor.right.apply(&b.parse("t").unwrap()),
            tensor.ring.parse("t'").unwrap()
        );
    }

    #[test]
    fn tensor_power_of_line_over_invariants() {
        // B = k[x] over A = k[x^n]: B ⊗_A B = B[X]/(X^n - x^n)
        let b = ring(Field::Rationals, &["x"], &[]);
        let (_a, a_to_b) = subalgebra_presentation(
            &b,
            &[b.parse("x^3").unwrap()],
            &["y".to_string()],
            &budget(),
        )
        .unwrap();
        let tensor = tensor_over_base(&a_to_b, &a_to_b, &budget()).unwrap();
        let expected = ring(Field::Rationals, &["x", "x'"], &["x^3 - x'^3"]);
        assert_eq!(tensor.ring, expected);
    }

    #[test]
    fn tensor_over_self_is_identity() {
        let b = ring(Field::Rationals, &["x"], &[]);
        let id = RingMap::identity(&b);
        let tensor = tensor_over_base(&id, &id, &budget()).unwrap();
        // k[x, x']/(x - x') ≅ k[x]; the presentation has one surviving variable
        let (dom, _) = dominance(&tensor.left, &budget()).unwrap();
        assert!(dom);
        let cert = finiteness_certificate(
            &tensor.left,
            &SaturationLimits::default(),
            &budget(),
        )
        .unwrap();
        assert_eq!(cert.generators.len(), 1);
    }

    #[test]
    fn monomial_curve_presentation() {
        // {t^3, t^4, t^5} in k[t] presents as (y^2-xz, z^2-x^2y, yz-x^3)
        let b = ring(Field::Rationals, &["t"], &[]);
        let (pres, onto) = subalgebra_presentation(
            &b,
            &[
                b.parse("t^3").unwrap(),
                b.parse("t^4").unwrap(),
                b.parse("t^5").unwrap(),
            ],
            &["x".to_string(), "y".to_string(), "z".to_string()],
            &budget(),
        )
        .unwrap();
        let expected = ring(
            Field::Rationals,
            &["x", "y", "z"],
            &["y^2 - x*z", "z^2 - x^2*y", "y*z - x^3"],
        );
        assert!(ideal_equal(&pres, &expected, &[0, 1, 2]).unwrap());
        // round trip: relations evaluated on the generators vanish
        for rel in pres.relations() {
            assert!(onto.target().contains(&onto.apply(rel)));
        }
    }

    #[test]
    fn free_subalgebra_presentations() {
        let b = ring(Field::Rationals, &["t"], &[]);
        let (pres, _) = subalgebra_presentation(
            &b,
            &[b.parse("t").unwrap()],
            &["u".to_string()],
            &budget(),
        )
        .unwrap();
        assert!(pres.relations().is_empty());
        let b2 = ring(Field::prime(2).unwrap(), &["x"], &[]);
        let (pres2, _) = subalgebra_presentation(
            &b2,
            &[b2.parse("x^2").unwrap()],
            &["u".to_string()],
            &budget(),
        )
        .unwrap();
        assert!(pres2.relations().is_empty());
    }

    #[test]
    fn non_finite_extension_hits_the_cap() {
        // k[y] -> k[x, y] is not module-finite: the saturation must stop at
        // its cap and say which one fired
        let b = ring(Field::Rationals, &["x", "y"], &[]);
        let a = ring(Field::Rationals, &["y"], &[]);
        let f = RingMap::new(a, b.clone(), vec![b.variable(1)], &budget()).unwrap();
        let limits = SaturationLimits {
            max_rounds: 3,
            max_generators: 64,
        };
        let err = finiteness_certificate(&f, &limits, &budget()).unwrap_err();
        assert!(matches!(err, Error::NotFinite { .. }));
        let tight = SaturationLimits {
            max_rounds: 64,
            max_generators: 4,
        };
        let err = finiteness_certificate(&f, &tight, &budget()).unwrap_err();
        match err {
            Error::NotFinite { cap, .. } => assert_eq!(cap, "generators"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_ring_is_flagged() {
        let r = ring(Field::Rationals, &["x"], &["x", "x - 1"]);
        assert!(r.is_zero_ring());
        assert!(!ring(Field::Rationals, &["x"], &["x"]).is_zero_ring());
    }

    #[test]
    fn ideal_equal_examples() {
        let r1 = ring(Field::Rationals, &["x", "y"], &["y^3 - x^4"]);
        let r2 = ring(Field::Rationals, &["x", "y"], &["x^4 - y^3"]);
        assert!(ideal_equal(&r1, &r2, &[0, 1]).unwrap());
        let r3 = ring(Field::Rationals, &["x"], &["x"]);
        let r4 = ring(Field::Rationals, &["x"], &["x^2"]);
        assert!(!ideal_equal(&r3, &r4, &[0]).unwrap());
    }

    #[test]
    fn cusp_module_generators() {
        // k[t] over k[t^3, t^4] is spanned by 1, t, t^2
        let b = ring(Field::Rationals, &["t"], &[]);
        let (_a, a_to_b) = subalgebra_presentation(
            &b,
            &[b.parse("t^3").unwrap(), b.parse("t^4").unwrap()],
            &["x".to_string(), "y".to_string()],
            &budget(),
        )
        .unwrap();
        let cert =
            finiteness_certificate(&a_to_b, &SaturationLimits::default(), &budget()).unwrap();
        assert_eq!(cert.generators.len(), 3);
        cert.replay(&a_to_b).unwrap();
    }

    #[test]
    fn graded_cover_certificate() {
        // C0 = B[z]/(z^2 - 1) over C∞ = B[X]/(X^2 - x^2) via X -> z x:
        // two module generators {1, z}
        let c0 = ring(Field::Rationals, &["x", "z"], &["z^2 - 1"]);
        let cinf = ring(Field::Rationals, &["x", "X"], &["X^2 - x^2"]);
        let rho = RingMap::new(
            cinf.clone(),
            c0.clone(),
            vec![c0.parse("x").unwrap(), c0.parse("z*x").unwrap()],
            &budget(),
        )
        .unwrap();
        let cert = finiteness_certificate(&rho, &SaturationLimits::default(), &budget()).unwrap();
        assert_eq!(cert.generators.len(), 2);
        assert_eq!(cert.generators[1], c0.parse("z").unwrap());
        cert.replay(&rho).unwrap();
    }

    #[test]
    fn tensor_is_symmetric_up_to_the_swap() {
        let b = ring(Field::Rationals, &["t"], &[]);
        let c = ring(Field::Rationals, &["s"], &["s^2 - 1"]);
        let (_a, a_to_b) = subalgebra_presentation(
            &b,
            &[b.parse("t^2").unwrap()],
            &["w".to_string()],
            &budget(),
        )
        .unwrap();
        let a_ring = a_to_b.source().clone();
        let a_to_c = RingMap::new(
            a_ring,
            c.clone(),
            vec![c.parse("s + 1").unwrap()],
            &budget(),
        )
        .unwrap();
        let t1 = tensor_over_base(&a_to_b, &a_to_c, &budget()).unwrap();
        let t2 = tensor_over_base(&a_to_c, &a_to_b, &budget()).unwrap();
        // swap correspondence: B-variables first in t1, last in t2
        let n_b = 1;
        let n_c = 1;
        let mut corr = Vec::new();
        for i in 0..n_b {
            corr.push(n_c + i);
        }
        for j in 0..n_c {
            corr.push(j);
        }
        assert!(ideal_equal(&t1.ring, &t2.ring, &corr).unwrap());
    }

    #[test]
    fn well_definedness_rejected() {
        let a = ring(Field::Rationals, &["x"], &["x^2"]);
        let b = ring(Field::Rationals, &["t"], &[]);
        let err = RingMap::new(a, b.clone(), vec![b.parse("t").unwrap()], &budget());
        assert!(matches!(err, Err(Error::MapNotWellDefined { .. })));
    }

    use crate::parse::parse_polynomial;
}
