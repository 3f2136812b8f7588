use num_bigint::BigInt;
use proptest::prelude::*;
use tlq::algebra::{GeneratorWord, TLElement};
use tlq::cell::{act, form, gram_on, CellBasis, CellVector};
use tlq::clifford::{clifford_mul, phi};
use tlq::diagram::{enumerate_all, PlanarDiagram};
use tlq::dims::{catalan, cell_dim};
use tlq::fusion::{fuse_vectors, hom_pairing, ring_product, FusionVector};
use tlq::scalars::{Cyclotomic, LaurentPoly, Rational, RootContext};
use tlq::series::TruncatedSeries;

fn ctx(ell: u32) -> RootContext {
    RootContext::new(ell).unwrap()
}

fn cyclo(ctx: &RootContext, cs: &[i64]) -> Cyclotomic {
    let f = ctx.field();
    let coeffs: Vec<Rational> = cs
        .iter()
        .take(f.degree())
        .map(|&c| Rational::new(BigInt::from(c), BigInt::from(1 + c.rem_euclid(3))))
        .collect();
    Cyclotomic::from_coeffs(f, &coeffs)
}

fn word(n: usize, raw: &[usize]) -> GeneratorWord {
    GeneratorWord::new(n, raw.iter().map(|r| 1 + r % (n - 1)).collect()).unwrap()
}

fn element(ctx: &RootContext, n: usize, words: &[(Vec<usize>, i64)]) -> TLElement {
    words.iter().fold(TLElement::zero(n, ctx), |acc, (w, c)| {
        &acc + &TLElement::from_word(&word(n, w), ctx).scale(&ctx.int(*c))
    })
}

fn words() -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0usize..8, 0..6), -3i64..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms(
        ell in 3u32..=8,
        a in prop::collection::vec(-5i64..=5, 8),
        b in prop::collection::vec(-5i64..=5, 8),
        c in prop::collection::vec(-5i64..=5, 8),
    ) {
        let ctx = ctx(ell);
        let (a, b, c) = (cyclo(&ctx, &a), cyclo(&ctx, &b), cyclo(&ctx, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn specialization_is_a_ring_map(
        ell in 3u32..=8,
        a in prop::collection::vec((-4i32..=4, -3i64..=3), 1..5),
        b in prop::collection::vec((-4i32..=4, -3i64..=3), 1..5),
    ) {
        let ctx = ctx(ell);
        let poly = |t: &[(i32, i64)]| LaurentPoly::from_terms(t.iter().map(|&(e, c)| (e, Rational::from_integer(c.into()))));
        let (p, q) = (poly(&a), poly(&b));
        prop_assert_eq!(ctx.specialize(&(&p * &q)), &ctx.specialize(&p) * &ctx.specialize(&q));
        prop_assert_eq!(ctx.specialize(&(&p + &q)), &ctx.specialize(&p) + &ctx.specialize(&q));
    }

    #[test]
    fn multiplication_is_associative(ell in 3u32..=6, n in 2usize..=5, a in words(), b in words(), c in words()) {
        let ctx = ctx(ell);
        let (a, b, c) = (element(&ctx, n, &a), element(&ctx, n, &b), element(&ctx, n, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn adjoint_reverses_products(ell in 3u32..=6, n in 2usize..=5, a in words(), b in words()) {
        let ctx = ctx(ell);
        let (a, b) = (element(&ctx, n, &a), element(&ctx, n, &b));
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn trace_is_cyclic_and_markov(ell in 3u32..=6, n in 2usize..=5, a in words(), b in words()) {
        let ctx = ctx(ell);
        let (a, b) = (element(&ctx, n, &a), element(&ctx, n, &b));
        prop_assert_eq!((&a * &b).markov_trace(), (&b * &a).markov_trace());
        prop_assert_eq!(a.tensor_identity(1).markov_trace(), a.markov_trace());
        let f = TLElement::generator(n, n + 1, &ctx).unwrap();
        prop_assert_eq!((&a.tensor_identity(1) * &f).markov_trace(), &a.markov_trace() * ctx.delta_inv());
    }

    #[test]
    fn cell_action_is_a_module(
        ell in 3u32..=6,
        n in 2usize..=6,
        t_raw in 0usize..=6,
        a in words(),
        b in words(),
        v in prop::collection::vec(-3i64..=3, 16),
        w in prop::collection::vec(-3i64..=3, 16),
    ) {
        let ctx = ctx(ell);
        let t = t_raw.min(n) + (n - t_raw.min(n)) % 2;
        let basis = CellBasis::new(t, n);
        let vec = |raw: &[i64]| CellVector((0..basis.len()).map(|i| ctx.int(raw[i % raw.len()])).collect());
        let (v, w) = (vec(&v), vec(&w));
        let (a, b) = (element(&ctx, n, &a), element(&ctx, n, &b));
        let left = act(&(&a * &b), &v, &basis).unwrap();
        let right = act(&a, &act(&b, &v, &basis).unwrap(), &basis).unwrap();
        prop_assert_eq!(left, right);
        let g = gram_on(&basis, &ctx);
        prop_assert_eq!(
            form(&g, &act(&a, &v, &basis).unwrap(), &w),
            form(&g, &v, &act(&a.adjoint(), &w, &basis).unwrap())
        );
    }

    #[test]
    fn diagram_composition_is_associative(n in 1usize..=5, i in 0usize..500, j in 0usize..500, k in 0usize..500) {
        let all = enumerate_all(n, n);
        let (a, b, c) = (&all[i % all.len()], &all[j % all.len()], &all[k % all.len()]);
        let (ab, l1) = a.compose(b).unwrap();
        let (ab_c, l2) = ab.compose(c).unwrap();
        let (bc, l3) = b.compose(c).unwrap();
        let (a_bc, l4) = a.compose(&bc).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(l1 + l2, l3 + l4);
        prop_assert_eq!(a.star().star(), a.clone());
        prop_assert_eq!(BigInt::from(all.len()), catalan(n as u32));
    }

    #[test]
    fn series_form_a_ring(
        a in prop::collection::vec(-4i64..=4, 1..8),
        b in prop::collection::vec(-4i64..=4, 1..8),
        c in prop::collection::vec(-4i64..=4, 1..8),
    ) {
        let s = |v: &[i64]| TruncatedSeries::from_i64(12, v);
        let (x, y, z) = (s(&a), s(&b), s(&c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        let mut unit = b.clone();
        unit[0] = 1;
        let u = s(&unit);
        prop_assert_eq!(&u * &u.inv().unwrap(), TruncatedSeries::one(12));
    }

    #[test]
    fn fusion_ring_laws(
        ell in 3u32..=9,
        a in prop::collection::vec(-4i64..=4, 8),
        b in prop::collection::vec(-4i64..=4, 8),
        c in prop::collection::vec(-4i64..=4, 8),
    ) {
        let v = |raw: &[i64]| FusionVector::from_i64(ell, &raw[..ell as usize - 1]).unwrap();
        let (x, y, z) = (v(&a), v(&b), v(&c));
        let xy = fuse_vectors(&x, &y).unwrap();
        prop_assert_eq!(&xy, &fuse_vectors(&y, &x).unwrap());
        prop_assert_eq!(fuse_vectors(&xy, &z).unwrap(), fuse_vectors(&x, &fuse_vectors(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(ring_product(&x, &y).unwrap(), xy);
        prop_assert_eq!(hom_pairing(&x, &y).unwrap(), hom_pairing(&y, &x).unwrap());
    }

    #[test]
    fn ising_map_is_multiplicative(n in 2usize..=6, a in prop::collection::vec(0usize..8, 0..8), b in prop::collection::vec(0usize..8, 0..8)) {
        let ctx = ctx(4);
        let (wa, wb) = (word(n, &a), word(n, &b));
        let mut joined = wa.indices().to_vec();
        joined.extend_from_slice(wb.indices());
        let wab = GeneratorWord::new(n, joined).unwrap();
        let lhs = phi(&wab, &ctx).unwrap();
        let rhs = clifford_mul(&phi(&wa, &ctx).unwrap(), &phi(&wb, &ctx).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cell_dims_sum_to_catalan(n in 0i64..=14) {
        let total: BigInt = (0..=n).filter(|t| (n - t) % 2 == 0).map(|t| {
            let w = cell_dim(t, (n - t) / 2);
            &w * &w
        }).sum();
        prop_assert_eq!(total, catalan(n as u32));
    }
}

#[test]
fn identity_diagram_is_neutral() {
    for n in 0..=5 {
        let id = PlanarDiagram::identity(n);
        for d in enumerate_all(n, n) {
            assert_eq!(id.compose(&d).unwrap(), (d.clone(), 0));
            assert_eq!(d.compose(&id).unwrap(), (d.clone(), 0));
        }
    }
}
