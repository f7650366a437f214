//! The symplectic generalized quadrangle W(q).
//!
//! Points are the 1-spaces of `V = GF(q)^4`, stored by their canonical
//! representative (first nonzero coordinate equal to 1) and enumerated in
//! lexicographic order. Lines are the totally isotropic 2-spaces, keyed by
//! their 2x4 reduced row-echelon basis and enumerated lexicographically by
//! that basis. The alternating form is
//! `(u, v) = u0 v3 + u1 v2 - u2 v1 - u3 v0`.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::gf2::BitVec;

pub type Vec4 = [FieldElem; 4];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point {point} lies on line {line}")]
    PointOnLine { point: usize, line: usize },
    #[error("point {point} has {count} lines meeting line {line}, expected exactly one")]
    ConnectorNotUnique { point: usize, line: usize, count: usize },
    #[error("lines {0} and {1} are not two distinct lines through point {2}")]
    NotConcurrent(usize, usize, usize),
    #[error("no grid of lines found between lines {ell} and {ell_prime}{}", if *.odd_characteristic { " (odd characteristic)" } else { "" })]
    NoGridFound { ell: usize, ell_prime: usize, odd_characteristic: bool },
    #[error("quadrangle axiom violated: {0}")]
    AxiomViolation(String),
}

/// `GF(q)^4` with the standard symplectic form.
#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    field: FieldSpec,
}

impl SymplecticSpace {
    pub fn new(field: FieldSpec) -> Self {
        SymplecticSpace { field }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// `(u, v) = u0 v3 + u1 v2 - u2 v1 - u3 v0`.
    pub fn form(&self, u: &Vec4, v: &Vec4) -> FieldElem {
        let f = &self.field;
        let plus = f.add(f.mul(u[0], v[3]), f.mul(u[1], v[2]));
        let minus = f.add(f.mul(u[2], v[1]), f.mul(u[3], v[0]));
        f.sub(plus, minus)
    }

    /// Coefficients of the linear form `x -> (u, x)`.
    pub fn dual_form(&self, u: &Vec4) -> Vec4 {
        let f = &self.field;
        [f.neg(u[3]), f.neg(u[2]), u[1], u[0]]
    }

    /// Scales `v` so its first nonzero coordinate is 1; `None` for `v = 0`.
    pub fn normalize(&self, v: &Vec4) -> Option<Vec4> {
        let lead = v.iter().copied().find(|c| !c.is_zero())?;
        let inv = self.field.inv(lead).ok()?;
        Some(v.map(|c| self.field.mul(c, inv)))
    }

    pub fn add(&self, u: &Vec4, v: &Vec4) -> Vec4 {
        [0, 1, 2, 3].map(|i| self.field.add(u[i], v[i]))
    }

    pub fn scale(&self, a: FieldElem, v: &Vec4) -> Vec4 {
        v.map(|c| self.field.mul(a, c))
    }

    fn encode(&self, v: &Vec4) -> usize {
        let q = self.field.q() as usize;
        v.iter().fold(0, |acc, c| acc * q + c.value() as usize)
    }
}

/// A point of P(V), as its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    pub coords: Vec4,
    pub index: usize,
}

/// A totally isotropic 2-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoLine {
    /// Reduced row-echelon basis.
    pub basis: [Vec4; 2],
    /// Sorted indices of the `q + 1` points.
    pub points: Vec<usize>,
    pub index: usize,
}

/// The restricted sets around `p0` and `ell0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedSets {
    /// Points outside the perp of `p0`.
    pub p1: Vec<usize>,
    /// Lines disjoint from `ell0`.
    pub l1: Vec<usize>,
    /// Lines through `p0`.
    pub x: Vec<usize>,
    /// `x` without `ell0`.
    pub x0: Vec<usize>,
    /// One line through each point of `ell0` other than `p0`, not `ell0` itself.
    pub y: Vec<usize>,
}

/// Two sets of `q` lines forming a grid between `ell` and `ell_prime`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPair {
    pub delta: Vec<usize>,
    pub lambda: Vec<usize>,
    pub anchor: usize,
    pub ell: usize,
    pub ell_prime: usize,
    /// The candidate point the accepted grid was built from.
    pub witness: usize,
    /// Every candidate point that produced a valid grid.
    pub successful_candidates: Vec<usize>,
    pub candidates_tried: usize,
}

#[derive(Debug, Clone)]
pub struct Quadrangle {
    space: SymplecticSpace,
    points: Vec<ProjPoint>,
    lines: Vec<IsoLine>,
    point_lines: Vec<Vec<usize>>,
    /// Point index of every nonzero vector, by base-q encoding.
    vec_point: Vec<u32>,
    p0: usize,
    ell0: usize,
}

impl Quadrangle {
    /// Enumerates all points and totally isotropic lines.
    pub fn new(field: FieldSpec) -> Self {
        let space = SymplecticSpace::new(field);
        let f = space.field().clone();
        let q = f.q() as usize;
        let elems: Vec<FieldElem> = f.elements().collect();

        let mut points = Vec::with_capacity(q * q * q + q * q + q + 1);
        let mut vec_point = vec![u32::MAX; q.pow(4)];
        for code in 1..q.pow(4) {
            let v: Vec4 = [3, 2, 1, 0].map(|k| elems[(code / q.pow(k)) % q]);
            if space.normalize(&v) == Some(v) {
                vec_point[code] = points.len() as u32;
                points.push(ProjPoint { coords: v, index: points.len() });
            }
        }
        for code in 1..q.pow(4) {
            if vec_point[code] == u32::MAX {
                let v: Vec4 = [3, 2, 1, 0].map(|k| elems[(code / q.pow(k)) % q]);
                let canon = space.normalize(&v).expect("nonzero");
                vec_point[code] = vec_point[space.encode(&canon)];
            }
        }

        // RREF 2x4 bases with pivots i < j.
        let mut bases: Vec<[Vec4; 2]> = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                // free (row, column) slots of the echelon form
                let slots: Vec<(usize, usize)> = (i + 1..4)
                    .filter(|&k| k != j)
                    .map(|k| (0, k))
                    .chain((j + 1..4).map(|k| (1, k)))
                    .collect();
                for code in 0..q.pow(slots.len() as u32) {
                    let mut rows = [[FieldElem::ZERO; 4]; 2];
                    rows[0][i] = FieldElem::ONE;
                    rows[1][j] = FieldElem::ONE;
                    let mut c = code;
                    for &(r, k) in slots.iter().rev() {
                        rows[r][k] = elems[c % q];
                        c /= q;
                    }
                    let [r0, r1] = rows;
                    if space.form(&r0, &r1).is_zero() {
                        bases.push([r0, r1]);
                    }
                }
            }
        }
        bases.sort();

        let mut lines = Vec::with_capacity(bases.len());
        let mut point_lines = vec![Vec::new(); points.len()];
        for (index, basis) in bases.into_iter().enumerate() {
            let [r0, r1] = basis;
            let mut pts: Vec<usize> = f
                .elements()
                .map(|b| vec_point[space.encode(&space.add(&r0, &space.scale(b, &r1)))] as usize)
                .collect();
            pts.push(vec_point[space.encode(&r1)] as usize);
            pts.sort_unstable();
            for &p in &pts {
                point_lines[p].push(index);
            }
            lines.push(IsoLine { basis, points: pts, index });
        }

        let one = FieldElem::ONE;
        let zero = FieldElem::ZERO;
        let p0 = vec_point[space.encode(&[one, zero, zero, zero])] as usize;
        let ell0 = lines
            .iter()
            .position(|l| l.basis == [[one, zero, zero, zero], [zero, one, zero, zero]])
            .expect("<e0, e1> is totally isotropic");

        Quadrangle { space, points, lines, point_lines, vec_point, p0, ell0 }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn field(&self) -> &FieldSpec {
        self.space.field()
    }

    pub fn q(&self) -> usize {
        self.field().q() as usize
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[IsoLine] {
        &self.lines
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// `<e0>`.
    pub fn p0(&self) -> usize {
        self.p0
    }

    /// `<e0, e1>`.
    pub fn ell0(&self) -> usize {
        self.ell0
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    pub fn line_points(&self, l: usize) -> &[usize] {
        &self.lines[l].points
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.lines[l].points.binary_search(&p).is_ok()
    }

    /// Point index of the span of a nonzero vector.
    pub fn point_of(&self, v: &Vec4) -> Option<usize> {
        let code = self.space.encode(v);
        (code != 0).then(|| self.vec_point[code] as usize)
    }

    pub fn line_by_basis(&self, basis: &[Vec4; 2]) -> Option<usize> {
        self.lines.binary_search_by(|l| l.basis.cmp(basis)).ok()
    }

    /// The common points of two lines.
    pub fn common_points(&self, a: usize, b: usize) -> Vec<usize> {
        let (pa, pb) = (&self.lines[a].points, &self.lines[b].points);
        pa.iter().copied().filter(|p| pb.binary_search(p).is_ok()).collect()
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.common_points(a, b).first().copied()
    }

    /// The line through two distinct collinear points.
    pub fn line_through(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        self.point_lines[a].iter().copied().find(|&l| self.incident(b, l))
    }

    pub fn collinear(&self, a: usize, b: usize) -> bool {
        a == b || self.line_through(a, b).is_some()
    }

    /// Points orthogonal to `p` under the form.
    pub fn perp(&self, p: usize) -> Vec<usize> {
        let u = self.points[p].coords;
        self.points
            .iter()
            .filter(|x| self.space.form(&u, &x.coords).is_zero())
            .map(|x| x.index)
            .collect()
    }

    /// Union of the lines through `p`.
    pub fn perp_by_lines(&self, p: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.point_lines[p].iter().flat_map(|&l| self.lines[l].points.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Characteristic vector of a line over the point set.
    pub fn line_vector(&self, l: usize) -> BitVec {
        BitVec::from_indices(self.points.len(), self.lines[l].points.iter().copied())
    }

    pub fn restricted_sets(&self) -> RestrictedSets {
        let y = self
            .line_points(self.ell0)
            .iter()
            .filter(|&&p| p != self.p0)
            .map(|&p| {
                *self.point_lines[p].iter().filter(|&&l| l != self.ell0).min().expect("q + 1 >= 2 lines")
            })
            .collect();
        self.restricted_sets_with_y(y)
    }

    /// Like [`Self::restricted_sets`] with a random choice of `Y`.
    pub fn restricted_sets_random_y<R: Rng>(&self, rng: &mut R) -> RestrictedSets {
        let y = self
            .line_points(self.ell0)
            .iter()
            .filter(|&&p| p != self.p0)
            .map(|&p| {
                let choices: Vec<usize> =
                    self.point_lines[p].iter().copied().filter(|&l| l != self.ell0).collect();
                *choices.choose(rng).expect("nonempty")
            })
            .collect();
        self.restricted_sets_with_y(y)
    }

    fn restricted_sets_with_y(&self, y: Vec<usize>) -> RestrictedSets {
        let p1 = self.points.iter().filter(|p| !p.coords[3].is_zero()).map(|p| p.index).collect();
        let ell0_points = &self.lines[self.ell0].points;
        let l1 = self
            .lines
            .iter()
            .filter(|l| !l.points.iter().any(|p| ell0_points.binary_search(p).is_ok()))
            .map(|l| l.index)
            .collect();
        let x = self.point_lines[self.p0].clone();
        let x0 = x.iter().copied().filter(|&l| l != self.ell0).collect();
        RestrictedSets { p1, l1, x, x0, y }
    }

    /// The unique line through `p` meeting `l`, for `p` not on `l`.
    pub fn unique_connector(&self, p: usize, l: usize) -> Result<usize, GeometryError> {
        if self.incident(p, l) {
            return Err(GeometryError::PointOnLine { point: p, line: l });
        }
        let hits: Vec<usize> =
            self.point_lines[p].iter().copied().filter(|&m| self.meet(m, l).is_some()).collect();
        match hits.as_slice() {
            [m] => Ok(*m),
            _ => Err(GeometryError::ConnectorNotUnique { point: p, line: l, count: hits.len() }),
        }
    }

    /// Exhaustive check of the counting and quadrangle axioms.
    pub fn verify_axioms(&self) -> Result<(), GeometryError> {
        let q = self.q();
        let expected = q * q * q + q * q + q + 1;
        if self.points.len() != expected || self.lines.len() != expected {
            return Err(GeometryError::AxiomViolation(format!(
                "{} points and {} lines, expected {expected} each",
                self.points.len(),
                self.lines.len()
            )));
        }
        if let Some(l) = self.lines.iter().find(|l| l.points.len() != q + 1) {
            return Err(GeometryError::AxiomViolation(format!("line {} has {} points", l.index, l.points.len())));
        }
        if let Some(p) = (0..self.points.len()).find(|&p| self.point_lines[p].len() != q + 1) {
            return Err(GeometryError::AxiomViolation(format!(
                "point {p} is on {} lines",
                self.point_lines[p].len()
            )));
        }
        for a in 0..self.lines.len() {
            for b in a + 1..self.lines.len() {
                if self.common_points(a, b).len() > 1 {
                    return Err(GeometryError::AxiomViolation(format!("lines {a} and {b} share two points")));
                }
            }
        }
        for p in 0..self.points.len() {
            for l in 0..self.lines.len() {
                if !self.incident(p, l) {
                    self.unique_connector(p, l)?;
                }
            }
        }
        Ok(())
    }

    /// Builds a grid of lines between two lines through `anchor`.
    ///
    /// With `u1`, `w1` the first points of `ell`, `ell_prime` other than the
    /// anchor, every `z` orthogonal to both (other than the anchor) is tried:
    /// `delta` collects the connectors from `ell` to the line `w1 z` and
    /// `lambda` the connectors from `ell_prime` to the line `u1 z`.
    pub fn grid_decompose(&self, ell: usize, ell_prime: usize, anchor: usize) -> Result<GridPair, GeometryError> {
        if ell == ell_prime || !self.incident(anchor, ell) || !self.incident(anchor, ell_prime) {
            return Err(GeometryError::NotConcurrent(ell, ell_prime, anchor));
        }
        let u1 = *self.line_points(ell).iter().find(|&&x| x != anchor).expect("q >= 1");
        let w1 = *self.line_points(ell_prime).iter().find(|&&x| x != anchor).expect("q >= 1");
        let (cu, cw) = (self.points[u1].coords, self.points[w1].coords);
        let candidates: Vec<usize> = self
            .points
            .iter()
            .filter(|z| {
                z.index != anchor
                    && self.space.form(&cu, &z.coords).is_zero()
                    && self.space.form(&cw, &z.coords).is_zero()
            })
            .map(|z| z.index)
            .collect();

        let mut found: Option<(Vec<usize>, Vec<usize>, usize)> = None;
        let mut successes = Vec::new();
        for &z in &candidates {
            if let Some((delta, lambda)) = self.try_grid(ell, ell_prime, anchor, u1, w1, z) {
                successes.push(z);
                if found.is_none() {
                    found = Some((delta, lambda, z));
                }
            }
        }
        let odd = self.field().p() != 2;
        let (delta, lambda, witness) = found.ok_or(GeometryError::NoGridFound { ell, ell_prime, odd_characteristic: odd })?;
        Ok(GridPair {
            delta,
            lambda,
            anchor,
            ell,
            ell_prime,
            witness,
            successful_candidates: successes,
            candidates_tried: candidates.len(),
        })
    }

    fn try_grid(
        &self,
        ell: usize,
        ell_prime: usize,
        anchor: usize,
        u1: usize,
        w1: usize,
        z: usize,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let lambda1 = self.line_through(w1, z)?;
        let delta1 = self.line_through(u1, z)?;
        let delta = self
            .line_points(ell)
            .iter()
            .filter(|&&u| u != anchor)
            .map(|&u| self.unique_connector(u, lambda1).ok())
            .collect::<Option<Vec<usize>>>()?;
        let lambda = self
            .line_points(ell_prime)
            .iter()
            .filter(|&&w| w != anchor)
            .map(|&w| self.unique_connector(w, delta1).ok())
            .collect::<Option<Vec<usize>>>()?;
        let pair = GridPair {
            delta,
            lambda,
            anchor,
            ell,
            ell_prime,
            witness: z,
            successful_candidates: Vec::new(),
            candidates_tried: 0,
        };
        self.is_valid_grid(&pair).then_some((pair.delta, pair.lambda))
    }

    /// Checks every grid invariant, including the GF(2) sum identity.
    pub fn is_valid_grid(&self, g: &GridPair) -> bool {
        let q = self.q();
        if g.delta.len() != q || g.lambda.len() != q {
            return false;
        }
        let hits_distinct = |set: &[usize], line: usize| -> bool {
            let mut hit: Vec<usize> = Vec::with_capacity(set.len());
            for &m in set {
                let common = self.common_points(m, line);
                match common.as_slice() {
                    [x] if *x != g.anchor => hit.push(*x),
                    _ => return false,
                }
            }
            hit.sort_unstable();
            hit.windows(2).all(|w| w[0] != w[1])
        };
        if !hits_distinct(&g.delta, g.ell) || !hits_distinct(&g.lambda, g.ell_prime) {
            return false;
        }
        for &d in &g.delta {
            for &l in &g.lambda {
                if d == l || self.meet(d, l).is_none() {
                    return false;
                }
            }
        }
        let mut sum = BitVec::zeros(self.points.len());
        for &m in g.delta.iter().chain(&g.lambda) {
            sum.xor_assign(&self.line_vector(m));
        }
        let mut target = self.line_vector(g.ell);
        target.xor_assign(&self.line_vector(g.ell_prime));
        sum == target
    }

    /// Concurrent pairs `(ell, ell_prime, anchor)` with the anchor on `ell0`
    /// and neither line equal to `ell0`.
    pub fn concurrent_pairs_on_ell0(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &p in self.line_points(self.ell0) {
            let through: Vec<usize> = self.point_lines[p].iter().copied().filter(|&l| l != self.ell0).collect();
            for (i, &a) in through.iter().enumerate() {
                for &b in &through[i + 1..] {
                    out.push((a, b, p));
                }
            }
        }
        out
    }
}

/// `(a:b:c:d)` formatting of a vector.
pub fn format_vec(v: &Vec4) -> String {
    format!("({}:{}:{}:{})", v[0], v[1], v[2], v[3])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(q: u64) -> Quadrangle {
        Quadrangle::new(FieldSpec::with_order(q).unwrap())
    }

    fn e(i: usize) -> Vec4 {
        let mut v = [FieldElem::ZERO; 4];
        v[i] = FieldElem::ONE;
        v
    }

    #[test]
    fn form_values() {
        let s = SymplecticSpace::new(FieldSpec::with_order(3).unwrap());
        assert_eq!(s.form(&e(0), &e(3)), FieldElem::ONE);
        assert_eq!(s.form(&e(1), &e(2)), FieldElem::ONE);
        assert_eq!(s.form(&e(0), &e(1)), FieldElem::ZERO);
        // antisymmetric in odd characteristic
        let f = s.field();
        assert_eq!(s.form(&e(3), &e(0)), f.neg(FieldElem::ONE));
        let v = [f.elem(1), f.elem(2), f.elem(0), f.elem(1)];
        assert_eq!(s.form(&v, &v), FieldElem::ZERO);
    }

    #[test]
    fn counts_small() {
        for (q, n) in [(2, 15), (3, 40), (4, 85)] {
            let g = quad(q);
            assert_eq!(g.num_points(), n);
            assert_eq!(g.num_lines(), n);
        }
    }

    #[test]
    fn distinguished_objects() {
        let g = quad(2);
        assert_eq!(g.points()[g.p0()].coords, e(0));
        assert_eq!(g.lines()[g.ell0()].basis, [e(0), e(1)]);
        let far = g.line_by_basis(&[e(2), e(3)]).expect("<e2,e3> is a line");
        assert!(g.common_points(far, g.ell0()).is_empty());
    }

    #[test]
    fn connector_example_q2() {
        let g = quad(2);
        let far = g.line_by_basis(&[e(2), e(3)]).unwrap();
        let expect = g.line_by_basis(&[e(0), e(2)]).unwrap();
        assert_eq!(g.unique_connector(g.p0(), far), Ok(expect));
        assert_eq!(
            g.unique_connector(g.p0(), g.ell0()),
            Err(GeometryError::PointOnLine { point: g.p0(), line: g.ell0() })
        );
    }

    #[test]
    fn perp_of_p0_is_last_coordinate_zero() {
        let g = quad(2);
        let perp = g.perp(g.p0());
        assert_eq!(perp.len(), 7);
        assert!(perp.iter().all(|&p| g.points()[p].coords[3].is_zero()));
        assert!(perp.contains(&g.p0()));
    }

    #[test]
    fn restricted_sets_q2() {
        let g = quad(2);
        let r = g.restricted_sets();
        assert_eq!(r.p1.len(), 8);
        assert_eq!(r.l1.len(), 8);
        assert_eq!(r.x.len(), 3);
        assert_eq!(r.x0.len(), 2);
        assert_eq!(r.y.len(), 2);
        for &l in &r.x {
            assert!(g.line_points(l).iter().all(|p| r.p1.binary_search(p).is_err()));
        }
    }

    #[test]
    fn grid_q2_all_pairs() {
        let g = quad(2);
        for (a, b, p) in g.concurrent_pairs_on_ell0() {
            let grid = g.grid_decompose(a, b, p).unwrap();
            assert!(g.is_valid_grid(&grid));
        }
    }

    #[test]
    fn grid_rejects_bad_input() {
        let g = quad(2);
        let l = g.lines_through(g.p0())[0];
        assert!(matches!(g.grid_decompose(l, l, g.p0()), Err(GeometryError::NotConcurrent(..))));
    }
}
