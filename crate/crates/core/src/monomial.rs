//! Monomials as dense exponent vectors, and monomial orders.

use std::cmp::Ordering;

/// A power product, one exponent per ambient variable. Variable identity is
/// positional; names are metadata kept by the surrounding ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn var(vars: usize, index: usize) -> Self {
        let mut e = vec![0; vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.len(), other.len(), "monomial length mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Exact division; `None` when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        assert_eq!(self.len(), other.len(), "monomial length mismatch");
        let mut out = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.len(), other.len(), "monomial length mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Re-house the exponents in an ambient with `new_vars` slots, sending old
    /// variable `i` to slot `idx_map[i]`.
    pub fn map_vars(&self, new_vars: usize, idx_map: &[usize]) -> Monomial {
        assert_eq!(idx_map.len(), self.len());
        let mut e = vec![0; new_vars];
        for (i, &ex) in self.0.iter().enumerate() {
            if ex > 0 {
                e[idx_map[i]] += ex;
            }
        }
        Monomial(e)
    }
}

/// Graded reverse lexicographic comparison on raw exponent slices.
pub(crate) fn degrevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller trailing exponent is larger
            return if x < y { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

/// A monomial order: total, multiplicative, with 1 minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex { vars: usize },
    DegRevLex { vars: usize },
    /// Compares the first `front` exponents under `front_order` and breaks
    /// ties with `back_order`; this eliminates the front block.
    Block {
        front: usize,
        front_order: Box<MonomialOrder>,
        back_order: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    pub fn lex(vars: usize) -> Self {
        MonomialOrder::Lex { vars }
    }

    pub fn degrevlex(vars: usize) -> Self {
        MonomialOrder::DegRevLex { vars }
    }

    /// The standard elimination order for a front block: degrevlex within
    /// each block, front block dominant.
    pub fn elimination(front: usize, back: usize) -> Self {
        MonomialOrder::Block {
            front,
            front_order: Box::new(MonomialOrder::degrevlex(front)),
            back_order: Box::new(MonomialOrder::degrevlex(back)),
        }
    }

    pub fn vars(&self) -> usize {
        match self {
            MonomialOrder::Lex { vars } | MonomialOrder::DegRevLex { vars } => *vars,
            MonomialOrder::Block {
                front, back_order, ..
            } => front + back_order.vars(),
        }
    }

    /// Whether discarding basis elements that touch the first `front`
    /// variables computes the elimination ideal.
    pub fn eliminates(&self, front: usize) -> bool {
        match self {
            MonomialOrder::Lex { .. } => true,
            MonomialOrder::DegRevLex { .. } => front == 0,
            MonomialOrder::Block { front: f, .. } => front == *f || front == 0,
        }
    }

    pub fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        assert_eq!(u.len(), v.len(), "monomial length mismatch");
        assert_eq!(u.len(), self.vars(), "order arity mismatch");
        self.cmp_slices(&u.0, &v.0)
    }

    fn cmp_slices(&self, u: &[u32], v: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex { .. } => lex_cmp(u, v),
            MonomialOrder::DegRevLex { .. } => degrevlex_cmp(u, v),
            MonomialOrder::Block {
                front,
                front_order,
                back_order,
            } => match front_order.cmp_slices(&u[..*front], &v[..*front]) {
                Ordering::Equal => back_order.cmp_slices(&u[*front..], &v[*front..]),
                ord => ord,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn lex_ignores_degree() {
        let ord = MonomialOrder::lex(2);
        // x vs y^2
        assert_eq!(ord.cmp(&m(&[1, 0]), &m(&[0, 2])), Ordering::Greater);
    }

    #[test]
    fn degrevlex_degree_dominates() {
        let ord = MonomialOrder::degrevlex(2);
        assert_eq!(ord.cmp(&m(&[1, 0]), &m(&[0, 2])), Ordering::Less);
        // same degree: x*z vs y^2 in 3 vars, y^2 wins
        let ord3 = MonomialOrder::degrevlex(3);
        assert_eq!(
            ord3.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn reflexive_equal() {
        let ord = MonomialOrder::elimination(1, 2);
        let u = m(&[2, 1, 3]);
        assert_eq!(ord.cmp(&u, &u), Ordering::Equal);
    }

    #[test]
    fn block_eliminates_front() {
        let ord = MonomialOrder::elimination(2, 1);
        assert!(ord.eliminates(2));
        assert!(!ord.eliminates(1));
        // any front-block content beats pure back content
        assert_eq!(ord.cmp(&m(&[1, 0, 0]), &m(&[0, 0, 9])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[3, 1]);
        let b = m(&[1, 1]);
        assert_eq!(a.div(&b), Some(m(&[2, 0])));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.lcm(&m(&[0, 4])), m(&[3, 4]));
        assert!(m(&[1, 0]).coprime(&m(&[0, 2])));
    }
}
