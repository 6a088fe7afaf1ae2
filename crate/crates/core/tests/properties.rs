use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use restrained_algebra::algebra::Algebra;
use restrained_algebra::bounds::{
    f_tilde, nakajima_bound, rhz_genus, stichtenoth_bound, BranchKind, CoverSpec, FTildeTerm,
};
use restrained_algebra::degeneration::{check_phi_roundtrip, equivariance_check, specialize, Family};
use restrained_algebra::ff::make_tower;
use restrained_algebra::gnd::{GroupElement, GroupSpec};
use restrained_algebra::linpoly::{from_subspace, kernel, LinearizedPoly, Subspace};
use restrained_algebra::matrix::enumerate_gl;
use restrained_algebra::restrained::{
    build_q, canonical_action, classify_all, omega_invariant, ramification_filtration, subgroup_filtration,
    theta_extract, verify_q_invariance,
};
use restrained_algebra::series::{mobius_apply, nth_root_hensel, MobiusMap, SeriesRing, TruncSeries};
use restrained_algebra::{Error, Fe, FieldTower};

fn tower_strategy() -> impl Strategy<Value = (u64, u32, u32)> {
    prop_oneof![Just((2, 1, 4)), Just((2, 2, 2)), Just((3, 1, 3)), Just((5, 1, 2)), Just((2, 1, 6)), Just((3, 2, 1))]
}

fn element(t: &FieldTower, k: u64) -> Fe {
    t.element(k % t.size()).unwrap()
}

/// `count` elements of `F_{q^m}` that are `F_q`-independent, or `None`.
fn independent(t: &FieldTower, seeds: &[u64]) -> Option<Vec<Fe>> {
    let mut out: Vec<Fe> = Vec::new();
    for &s in seeds {
        let mut k = s % t.size();
        for _ in 0..t.size() {
            let x = t.element(k).unwrap();
            let mut trial = out.clone();
            trial.push(x);
            if Subspace::new(t, trial).is_ok() {
                out.push(x);
                break;
            }
            k = (k + 1) % t.size();
        }
    }
    (out.len() == seeds.len()).then_some(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, s, m) in tower_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let t = make_tower(p, s, m, None).unwrap();
        let (a, b, c) = (element(&t, a), element(&t, b), element(&t, c));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
        prop_assert_eq!(t.add(a, t.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(t.mul(a, t.inv(a).unwrap()), Fe::ONE);
        }
        prop_assert_eq!(t.frobenius(t.add(a, b), 1), t.add(t.frobenius(a, 1), t.frobenius(b, 1)));
        prop_assert_eq!(t.frobenius_q(a, m), a);
    }

    #[test]
    fn subspace_polynomial_bijection((p, s, m) in tower_strategy(), seeds in prop::collection::vec(any::<u64>(), 1..4)) {
        let t = make_tower(p, s, m, None).unwrap();
        prop_assume!(seeds.len() <= m as usize);
        let Some(basis) = independent(&t, &seeds) else { return Ok(()); };
        let v = Subspace::new(&t, basis).unwrap();
        let pv = from_subspace(&t, &v);
        prop_assert_eq!(pv.height(), v.dim());
        let back = kernel(&t, &pv).unwrap();
        prop_assert!(back.same_as(&t, &v));
        for x in v.elements(&t) {
            prop_assert!(pv.eval(&t, &x).is_zero());
        }
    }

    #[test]
    fn linearized_composition_is_substitution((p, s, m) in tower_strategy(), a in prop::collection::vec(any::<u64>(), 1..4), b in prop::collection::vec(any::<u64>(), 1..4), x in any::<u64>()) {
        let t = make_tower(p, s, m, None).unwrap();
        let pa = LinearizedPoly::new(&t, a.iter().map(|&k| element(&t, k)).collect());
        let pb = LinearizedPoly::new(&t, b.iter().map(|&k| element(&t, k)).collect());
        let x = element(&t, x);
        prop_assert_eq!(pa.compose(&t, &pb).eval(&t, &x), pa.eval(&t, &pb.eval(&t, &x)));
    }

    #[test]
    fn series_valuations((p, s, m) in tower_strategy(), f in prop::collection::vec(any::<u64>(), 1..12), g in prop::collection::vec(any::<u64>(), 1..12), vf in -3i64..4, vg in -3i64..4) {
        let t = make_tower(p, s, m, None).unwrap();
        let ring = SeriesRing::new(&t, 40);
        let mk = |v: i64, cs: &[u64]| {
            let mut coeffs: Vec<Fe> = cs.iter().map(|&k| element(&t, k)).collect();
            if coeffs[0].is_zero() { coeffs[0] = Fe::ONE; }
            TruncSeries::from_coeffs(v, coeffs, v + 30)
        };
        let (f, g) = (mk(vf, &f), mk(vg, &g));
        let fg = ring.mul(&f, &g);
        prop_assert_eq!(fg.valuation().unwrap(), vf + vg);
        prop_assert!(fg.prec() <= (vf + g.prec()).min(vg + f.prec()));
        let inv = ring.inverse(&f).unwrap();
        let one = ring.mul(&f, &inv);
        prop_assert!(ring.sub(&one, &ring.one()).residual_valuation() >= one.prec().min(30));
        prop_assert_eq!(ring.add(&f, &g).residual_valuation() >= vf.min(vg), true);
    }

    #[test]
    fn mobius_composition_matches_substitution(a in any::<u64>(), c in any::<u64>(), a2 in any::<u64>(), c2 in any::<u64>()) {
        let t = make_tower(2, 1, 4, None).unwrap();
        let nz = |k: u64| t.element(1 + k % (t.size() - 1)).unwrap();
        let m1 = MobiusMap::new(&t, nz(a), Fe::ZERO, element(&t, c), Fe::ONE).unwrap();
        let m2 = MobiusMap::new(&t, nz(a2), Fe::ZERO, element(&t, c2), Fe::ONE).unwrap();
        let ring = SeriesRing::new(&t, 30);
        let lhs = mobius_apply(&ring, &m1.compose(&t, &m2), &ring.x()).unwrap();
        let rhs = mobius_apply(&ring, &m1, &mobius_apply(&ring, &m2, &ring.x()).unwrap()).unwrap();
        prop_assert!(ring.sub(&lhs, &rhs).residual_valuation() >= 28);
        let via_compose = ring.compose(&mobius_apply(&ring, &m1, &ring.x()).unwrap(), &mobius_apply(&ring, &m2, &ring.x()).unwrap()).unwrap();
        prop_assert!(ring.sub(&lhs, &via_compose).residual_valuation() >= 28);
    }

    #[test]
    fn hensel_root_converges(cs in prop::collection::vec(any::<u64>(), 1..10), pick in 0usize..3) {
        let (p, s, m, n) = [(2u64, 2u32, 1u32, 3u64), (3, 1, 2, 2), (5, 1, 1, 4)][pick];
        let t = make_tower(p, s, m, Some(n)).unwrap();
        let ring = SeriesRing::new(&t, 48);
        let tail = TruncSeries::from_coeffs(2, cs.iter().map(|&k| element(&t, k)).collect(), 48);
        let alpha = ring.add(&ring.one(), &tail);
        let lift = nth_root_hensel(&ring, &alpha, n).unwrap();
        prop_assert!(lift.converges_quadratically());
        let check = ring.sub(&ring.pow(&lift.value, n), &alpha);
        prop_assert!(check.residual_valuation() >= 48);
        prop_assert!(ring.sub(&lift.value, &ring.one()).residual_valuation() >= 2);
    }

    #[test]
    fn group_axioms(i in any::<u64>(), j in any::<u64>(), k in any::<u64>()) {
        let spec = GroupSpec::new(Arc::new(make_tower(2, 2, 1, Some(3)).unwrap()), 2).unwrap();
        let o = spec.order();
        let (g, h, l) = (spec.element_at(i % o), spec.element_at(j % o), spec.element_at(k % o));
        prop_assert_eq!(spec.mul(&spec.mul(&g, &h), &l), spec.mul(&g, &spec.mul(&h, &l)));
        prop_assert!(spec.is_identity(&spec.mul(&g, &spec.inv(&g))));
        prop_assert_eq!(spec.index_of(&g), i % o);
    }

    #[test]
    fn q_polynomial_shape(a in prop::collection::vec(any::<u64>(), 0..3), n in prop::sample::select(vec![1u64, 3])) {
        let t = make_tower(2, 2, 2, None).unwrap();
        let mut a: Vec<Fe> = a.iter().map(|&k| element(&t, k)).collect();
        if let Some(last) = a.last_mut() { if last.is_zero() { *last = Fe::ONE; } }
        let q = build_q(&t, n, &a).unwrap();
        prop_assert_eq!(q.degree() as u64, n * 4u64.pow(a.len() as u32));
        prop_assert!(q.is_eisenstein());
        prop_assert!(q.check_laurent_identity(&t));
    }
}

fn canonical_types() -> Vec<(u64, u32, u32, u64, usize)> {
    // (p, s, m, n, d) with n·q^d ≤ 200
    vec![
        (2, 1, 3, 1, 1),
        (2, 1, 3, 1, 2),
        (2, 1, 3, 1, 3),
        (2, 2, 2, 3, 1),
        (2, 2, 2, 3, 2),
        (3, 1, 2, 2, 1),
        (3, 1, 3, 2, 2),
        (5, 1, 2, 4, 1),
        (7, 1, 1, 6, 1),
        (3, 2, 1, 8, 1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_action_series_homomorphism(pick in 0usize..10, seeds in prop::collection::vec(any::<u64>(), 3), i in any::<u64>(), j in any::<u64>()) {
        let (p, s, m, n, d) = canonical_types()[pick];
        let spec = GroupSpec::new(Arc::new(make_tower(p, s, m, Some(n)).unwrap()), d).unwrap();
        let Some(theta) = independent(spec.tower(), &seeds[..d]) else { return Ok(()); };
        let act = canonical_action(spec.clone(), theta.clone(), 24).unwrap();
        let o = spec.order();
        let (g, h) = (spec.element_at(i % o), spec.element_at(j % o));
        let ring = SeriesRing::new(spec.tower(), 24);
        // substitution: (gh)(x) = h(x) evaluated at g(x)
        let lhs = act.series(&spec.mul(&g, &h)).unwrap();
        let rhs = ring.compose(&act.series(&h).unwrap(), &act.series(&g).unwrap()).unwrap();
        prop_assert!(ring.sub(&lhs, &rhs).residual_valuation() >= 24);
        let table = act.series_table().unwrap();
        prop_assert_eq!(theta_extract(&spec, &table).unwrap(), theta);
    }

    #[test]
    fn restraint_and_subquotients(pick in 0usize..10, seeds in prop::collection::vec(any::<u64>(), 3), sub in any::<u64>(), tame in any::<bool>()) {
        let (p, s, m, n, d) = canonical_types()[pick];
        let spec = GroupSpec::new(Arc::new(make_tower(p, s, m, Some(n)).unwrap()), d).unwrap();
        let Some(theta) = independent(spec.tower(), &seeds[..d]) else { return Ok(()); };
        let act = canonical_action(spec.clone(), theta, 16).unwrap();
        let q = spec.q();
        let hd = spec.h_order();
        prop_assert_eq!(ramification_filtration(&act).unwrap(), vec![spec.order(), spec.order(), hd, 1]);

        // H' spanned by one random vector of H, with or without the torus
        let v = spec.element_at(sub % hd).sigma;
        let t = spec.tower();
        let mut els: Vec<GroupElement> = Vec::new();
        for c in t.base_elements() {
            let sigma: Vec<Fe> = v.iter().map(|&x| t.mul(c, x)).collect();
            let top = if tame { n } else { 1 };
            for a in 0..top {
                els.push(GroupElement { sigma: sigma.clone(), a });
            }
        }
        let f = subgroup_filtration(&act, &els).unwrap();
        // G_2 is trivial
        prop_assert!(f.len() <= 4);
        prop_assert_eq!(*f.last().unwrap(), 1);
        if v.iter().any(|x| !x.is_zero()) && f.len() == 4 {
            prop_assert_eq!(f[2], q);
        }
    }

    #[test]
    fn omega_well_defined(seeds in prop::collection::vec(any::<u64>(), 2), gl_pick in any::<usize>(), c in 1u64..16) {
        let t = make_tower(2, 1, 4, None).unwrap();
        let Some(theta) = independent(&t, &seeds) else { return Ok(()); };
        let gl = enumerate_gl(&t, 2).unwrap();
        let a = gl[gl_pick % gl.len()].matrix();
        // θ ∘ A: new basis images Σ_i a_{ij} θ_i
        let changed: Vec<Fe> = (0..2)
            .map(|j| (0..2).fold(Fe::ZERO, |acc, i| t.add(acc, t.mul(a.get(i, j), theta[i]))))
            .collect();
        let base = omega_invariant(&t, &theta).unwrap();
        prop_assert_eq!(&omega_invariant(&t, &changed).unwrap(), &base);
        let scalar = t.element(c).unwrap();
        let scaled: Vec<Fe> = theta.iter().map(|&x| t.mul(scalar, x)).collect();
        prop_assert_eq!(omega_invariant(&t, &scaled).unwrap(), base);
    }
}

/// Classes of `d`-subspaces modulo scaling, by union–find over spans of all
/// independent `d`-tuples.
fn naive_class_count(p: u64, s: u32, d: usize, m: u32) -> usize {
    let t = make_tower(p, s, m, None).unwrap();
    let nonzero: Vec<Fe> = t.elements().skip(1).collect();
    let mut spaces: BTreeSet<Vec<Fe>> = BTreeSet::new();
    let mut idx = vec![0usize; d];
    loop {
        let tuple: Vec<Fe> = idx.iter().map(|&i| nonzero[i]).collect();
        if let Ok(v) = Subspace::new(&t, tuple) {
            spaces.insert(v.sorted_elements(&t));
        }
        let mut k = d;
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < nonzero.len() {
                break;
            }
            idx[k] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }
    let list: Vec<Vec<Fe>> = spaces.into_iter().collect();
    let pos: BTreeMap<Vec<Fe>, usize> = list.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..list.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for (i, v) in list.iter().enumerate() {
        for &c in &nonzero {
            let mut w: Vec<Fe> = v.iter().map(|&x| t.mul(c, x)).collect();
            w.sort();
            let j = pos[&w];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..list.len()).filter(|&i| find(&mut parent, i) == i).count()
}

#[test]
fn classification_matches_naive_union_find() {
    for &(p, s, d, m) in &[
        (2u64, 1u32, 1usize, 4u32),
        (2, 1, 2, 3),
        (2, 1, 2, 4),
        (3, 1, 2, 3),
        (2, 2, 2, 2),
        (2, 1, 3, 5),
        (2, 1, 2, 5),
    ] {
        let c = classify_all(p, s, d as u32, m).unwrap();
        assert_eq!(c.classes.len(), naive_class_count(p, s, d, m), "(p, s, d, m) = ({p}, {s}, {d}, {m})");
    }
}

#[test]
fn q_invariance_random_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(p, s, m, n, d) in
        &[(2u64, 1u32, 4u32, 1u64, 1usize), (2, 1, 4, 1, 2), (2, 2, 2, 3, 1), (3, 1, 2, 2, 1), (2, 1, 6, 1, 2)]
    {
        let spec = GroupSpec::new(Arc::new(make_tower(p, s, m, Some(n)).unwrap()), d).unwrap();
        let t = spec.tower();
        for _ in 0..4 {
            let seeds: Vec<u64> = (0..d).map(|_| rng.gen()).collect();
            let theta = independent(t, &seeds).unwrap();
            let v = Subspace::new(t, theta.clone()).unwrap();
            let a = from_subspace(t, &v).normalized(t).unwrap();
            let act = canonical_action(spec.clone(), theta, 24).unwrap();
            assert_eq!(verify_q_invariance(&act, &a, n), Ok(true));
        }
    }
}

#[test]
fn degeneration_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = [(2u64, 1u32, 4u32, 1u64), (2, 2, 2, 3), (3, 1, 2, 2)];
    let mut done = 0;
    for &(p, s, m, n) in cases.iter().cycle().take(21) {
        let spec = GroupSpec::new(Arc::new(make_tower(p, s, m, Some(n)).unwrap()), 2).unwrap();
        let size = spec.tower().size();
        let s1 = spec.tower().element(rng.gen_range(1..size)).unwrap();
        let fam = match Family::new(spec, vec![s1], 20) {
            Ok(f) => f,
            Err(Error::RootsNotRational { .. }) => continue,
            Err(e) => panic!("family ({p},{s},{m},{n}): {e:?}"),
        };
        let t = fam.tower().element(rng.gen_range(1..fam.tower().size())).unwrap();
        let sp = match specialize(&fam, t) {
            Ok(sp) => sp,
            // the Artin–Schreier roots live beyond the widening cap
            Err(Error::RootsNotRational { .. }) => continue,
            Err(e) => panic!("({p},{s},{m},{n}) t = {t:?}: {e:?}"),
        };
        assert_eq!(ramification_filtration(&sp.action).unwrap()[2], sp.spec().h_order());
        let rep = check_phi_roundtrip(&sp).unwrap();
        assert_eq!(rep.exponent, sp.tower().q() - 1);
        assert!(rep.relation_residual >= 20);
        equivariance_check(&sp).unwrap();
        done += 1;
    }
    assert!(done >= 15, "only {done} of 21 samples fit the widening cap");
}

#[test]
fn bounds_properties() {
    for g in 2..=10_000u64 {
        assert!(nakajima_bound(g).unwrap() <= stichtenoth_bound(g).unwrap().value);
    }
    let mut crossed = false;
    for g in 2..=3000u64 {
        let f = f_tilde(g).unwrap();
        if f.term == FTildeTerm::Second {
            crossed = true;
        } else {
            assert!(!crossed, "f̃ switched back at g = {g}");
            assert_eq!(f.bound.value, 84 * (g as u128 - 1));
        }
    }
    assert!(crossed);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let order = 2 * rng.gen_range(1..50u64);
        let k = rng.gen_range(0..8);
        let cover = CoverSpec {
            base_genus: rng.gen_range(0..4),
            group_order: order,
            branch_points: vec![BranchKind::Tame { e: 2 }; k],
        };
        match rhz_genus(&cover) {
            Ok(g) => assert_eq!(
                2 * g as i128 - 2,
                order as i128 * (2 * cover.base_genus as i128 - 2) + (order / 2 * k as u64) as i128
            ),
            Err(_) => assert!((order / 2 * k as u64) % 2 == 1 || cover.base_genus == 0),
        }
    }
}
