use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lu3q_core::gf2::kernel_intersection;
use lu3q_core::incidence::full_code;
use lu3q_core::poly::{digitize_monomial, kernel_normal_form, BetaBasis, FqEchelon, Monomial, PolyFn, PolyRing};
use lu3q_core::{BitMatrix, BitVec, Exec, FieldElem, FieldSpec, Quadrangle, Vec4};

fn setup(q: u64) -> (Quadrangle, PolyRing) {
    let g = Quadrangle::new(FieldSpec::with_order(q).unwrap());
    let ring = PolyRing::new(g.field().clone());
    (g, ring)
}

fn all_vectors(f: &FieldSpec) -> Vec<Vec4> {
    let els: Vec<FieldElem> = f.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[test]
fn line_polynomials_evaluate_to_incidence() {
    for q in [2u64, 4] {
        let (g, ring) = setup(q);
        let vectors = all_vectors(g.field());
        for l in 0..g.num_lines() {
            let f = ring.delta_line(&g, l);
            for v in vectors.iter().skip(1) {
                let p = g.point_of(v).unwrap();
                let expect = if g.incident(p, l) { FieldElem::ONE } else { FieldElem::ZERO };
                assert_eq!(ring.evaluate(&f, v), expect, "q = {q}, line {l}");
            }
        }
    }
}

#[test]
fn point_polynomials_evaluate_to_indicators() {
    for q in [2u64, 4] {
        let (g, ring) = setup(q);
        let vectors = all_vectors(g.field());
        for p in 0..g.num_points() {
            let f = ring.delta_point(&g, p);
            for v in vectors.iter().skip(1) {
                let expect = if g.point_of(v) == Some(p) { FieldElem::ONE } else { FieldElem::ZERO };
                assert_eq!(ring.evaluate(&f, v), expect);
            }
        }
    }
}

#[test]
fn line_polynomial_is_sum_of_its_point_polynomials() {
    for q in [2u64, 4, 8] {
        let (g, ring) = setup(q);
        for l in [0, g.ell0(), g.num_lines() / 2, g.num_lines() - 1] {
            assert_eq!(ring.interpolate(&g, &g.line_vector(l)), ring.delta_line(&g, l));
        }
    }
}

#[test]
fn term_degrees_are_multiples_of_q_minus_1() {
    for q in [2u32, 4, 8] {
        let (g, ring) = setup(q as u64);
        let lines = Exec::Parallel.map_range(g.num_lines(), |l| ring.delta_line(&g, l));
        for f in &lines {
            assert!(f.monomials().all(|m| [0, q - 1, 2 * (q - 1)].contains(&m.degree())));
        }
        for p in 0..g.num_points() {
            assert!(ring.delta_point(&g, p).monomials().all(|m| m.degree() % (q - 1) == 0));
        }
    }
}

fn random_poly(ring: &PolyRing, rng: &mut ChaCha8Rng, max_exp: u32) -> PolyFn {
    let mut f = PolyFn::zero();
    for _ in 0..6 {
        let m = Monomial([0; 4].map(|_| rng.gen_range(0..=max_exp)));
        let c = ring.field().elem(rng.gen_range(1..ring.q()));
        f = ring.add(&f, &PolyFn::monomial(m, c));
    }
    f
}

#[test]
fn reduction_preserves_every_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [2u64, 4] {
        let (g, ring) = setup(q);
        let vectors = all_vectors(g.field());
        for _ in 0..20 {
            let f = random_poly(&ring, &mut rng, 12);
            let r = ring.reduce(&f);
            assert!(r.monomials().all(|m| m.0.iter().all(|&e| e < q as u32)));
            for v in &vectors {
                assert_eq!(ring.evaluate(&f, v), ring.evaluate(&r, v));
            }
        }
    }
}

/// Membership by rank comparison over GF(2): `β` has 0/1 coefficients, so
/// `f` is in its GF(q)-span iff each GF(2) component of `f` (bit `j` of
/// every coefficient) is in its GF(2)-span.
fn oracle_in_span(ring: &PolyRing, beta: &BetaBasis, f: &PolyFn) -> bool {
    let q = ring.q();
    let width = (q as usize).pow(4);
    let to_bits = |g: &PolyFn, bit: u32| {
        BitVec::from_indices(width, g.terms().filter(|(_, c)| c.value() >> bit & 1 == 1).map(|(m, _)| m.dense_index(q)))
    };
    let base: Vec<BitVec> = beta.elements().iter().map(|g| to_bits(g, 0)).collect();
    let base_rank = BitMatrix::from_rows(width, &base).rank();
    let mut augmented = base;
    augmented.extend((0..ring.field().t()).map(|j| to_bits(f, j)));
    BitMatrix::from_rows(width, &augmented).rank() == base_rank
}

#[test]
fn beta_solver_agrees_with_rank_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for q in [2u64, 4, 8] {
        let (g, ring) = setup(q);
        let beta = BetaBasis::new(&ring, Exec::Parallel).unwrap();
        assert!(beta.elements().iter().all(|f| f.terms().all(|(_, c)| c.value() == 1)));
        assert!(beta.contains(&PolyFn::zero()));
        let mut samples: Vec<PolyFn> = (0..g.num_lines()).step_by(7).map(|l| ring.delta_line(&g, l)).collect();
        samples.extend((0..10).map(|_| random_poly(&ring, &mut rng, q as u32 - 1)));
        // a combination of β elements with non-binary coefficients
        let comb = beta.elements().iter().take(5).enumerate().fold(PolyFn::zero(), |acc, (i, e)| {
            ring.add(&acc, &ring.scale(e, ring.field().elem((i as u32 % (q as u32 - 1)) + 1)))
        });
        samples.push(comb.clone());
        for f in &samples {
            assert_eq!(beta.contains(f), oracle_in_span(&ring, &beta, f), "q = {q}: {f}");
        }
        assert!(beta.contains(&comb));
    }
}

/// A digit of degree three or more; no element of `β` has one.
fn has_heavy_digit(ring: &PolyRing, m: &Monomial) -> bool {
    digitize_monomial(ring, m).unwrap().degrees().iter().any(|&d| d >= 3)
}

/// Measured: every line polynomial lies in the span of `β` at q = 2, but
/// from q = 4 on some do not. At q = 4 the monomial `x1*x2*x3` (digits
/// `[x1*x2*x3, 1]`) occurs, and no element of `β` has a digit of degree 3.
#[test]
fn line_polynomials_against_beta() {
    for (q, expect_all) in [(2u64, true), (4, false), (8, false)] {
        let (g, ring) = setup(q);
        let beta = BetaBasis::new(&ring, Exec::Parallel).unwrap();
        assert!(beta.elements().iter().all(|b| b.monomials().all(|m| !has_heavy_digit(&ring, m))));
        let lines = Exec::Parallel.map_range(g.num_lines(), |l| ring.delta_line(&g, l));
        let outside: Vec<usize> = (0..lines.len()).filter(|&l| !beta.contains(&lines[l])).collect();
        assert_eq!(outside.is_empty(), expect_all, "q = {q}");
        for &l in &outside {
            assert!(!oracle_in_span(&ring, &beta, &lines[l]));
            assert!(lines[l].monomials().any(|m| has_heavy_digit(&ring, m)), "q = {q}, line {l}");
        }
        if q == 4 {
            let witness = Monomial([0, 1, 1, 1]);
            assert!(outside.iter().any(|&l| !lines[l].coefficient(&witness).is_zero()));
        }
    }
}

#[test]
fn beta_rank_is_at_most_its_size() {
    for (q, t) in [(2u64, 1u32), (4, 2), (8, 3)] {
        let (_, ring) = setup(q);
        let beta = BetaBasis::new(&ring, Exec::Sequential).unwrap();
        assert_eq!(beta.elements().len(), 10usize.pow(t));
        assert!(beta.rank() <= beta.elements().len());
    }
}

#[test]
fn normal_forms_of_a_full_kernel_basis() {
    for q in [2u64, 4, 8] {
        let (g, ring) = setup(q);
        let code = full_code(&g);
        let ker = kernel_intersection(&code, &g.restricted_sets().p1);
        assert_eq!(ker.dim(), q as usize + 1);
        let mut h_space = FqEchelon::new(g.field().clone());
        for v in ker.basis_vectors() {
            let nf = kernel_normal_form(&ring, &g, &code, &v).unwrap_or_else(|e| panic!("q = {q}: {e}"));
            assert!(nf.h.monomials().all(|m| m.0[0] == 0 && m.0[3] == 0));
            h_space.insert(nf.h.terms().map(|(m, c)| (m.dense_index(q as u32), *c)));
        }
        assert!(h_space.rank() <= q as usize + 1);
        assert_eq!(h_space.rank(), q as usize + 1);
    }
}
