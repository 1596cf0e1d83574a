//! Acceptance suite: one test per acceptance criterion, each emitting a
//! single `[PASS]` line on success (visible with `-- --nocapture`). A
//! failing criterion fails its test, so `cargo test --test acceptance`
//! doubles as the overall verdict.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mqt::channels::{
    apply_type_l, check_unconditional, dilate, extend_to_joint, kraus_from_extension, maps_agree,
    verify_type_e, TypeLMap,
};
use mqt::field::FieldSpec;
use mqt::hvgames::{joint_assignment_survivors, noncontextual_search, play_game, ContextFamily, GameStrategy};
use mqt::linalg::Matrix;
use mqt::resolve::{
    check_prob_ns, classify, hall_resolution, mqt_search, prbox_resolution, resolution_unique,
    singlet_resolution, strong_resolution, weak_resolution, MqtSearchBounds, MqtVerdict,
    WeakResolution,
};
use mqt::sample::{random_dual_basis, random_lhv_table, random_matrix, random_maximal_state};
use mqt::states::{
    all_subspaces, apply_left, connect_purifications, mobit, projective_points, purify, reduce,
    schmidt, schmidt_reassemble, Measurement, StateSpace, Subspace, Variance, Vector,
    DEFAULT_ENUM_BUDGET,
};
use mqt::tables::{
    all_strategies, build_table, check_modal_ns, is_minimal_ns, lhv_membership, prbox_table,
    singlet_table, table_n, xyz_menu, Scenario,
};

fn report(n: usize, what: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "criterion {n} exceeded its time budget: {elapsed:?} >= {limit:?}"
    );
    println!("[PASS] criterion {n:2}: {what} ({elapsed:.2?})");
}

fn random_menu(
    rng: &mut ChaCha8Rng,
    dim: usize,
    field: FieldSpec,
    n: usize,
) -> Vec<(String, Measurement)> {
    let space = StateSpace::new(dim, field);
    (0..n)
        .map(|i| {
            let bras: Vec<Vector> = random_dual_basis(rng, dim, field);
            (format!("M{i}"), Measurement::basic(&bras, &space).unwrap())
        })
        .collect()
}

#[test]
fn criterion_01_singlet_table_bit_exact() {
    let start = Instant::now();
    let field = FieldSpec::new(2).unwrap();
    let state = Subspace::line(&mobit::singlet(field)).unwrap();
    let menu = xyz_menu(field);
    let built = build_table(&state, &menu, &menu).unwrap();
    assert_eq!(built, singlet_table(), "computed singlet table differs from the fixture");
    report(1, "singlet possibility table reproduced bit-exactly", start, Duration::from_secs(60));
}

#[test]
fn criterion_02_kochen_specker_mobit() {
    let start = Instant::now();
    let field = FieldSpec::new(2).unwrap();
    let family = ContextFamily::mobit_pairs(field);
    assert_eq!(family.effects().len(), 3, "a mobit has three projective dual points");
    assert_eq!(
        noncontextual_search(&family, 1 << 10).unwrap(),
        None,
        "all 8 assignments must be rejected"
    );
    report(2, "no noncontextual assignment over the mobit contexts", start, Duration::from_secs(60));
}

#[test]
fn criterion_03_joint_assignment_elimination() {
    let start = Instant::now();
    let t = singlet_table();
    assert_eq!(all_strategies(t.scenario()).len(), 64);
    let survivors = joint_assignment_survivors(&t, 1 << 10).unwrap();
    assert!(survivors.is_empty(), "all 64 joint assignments must be eliminated");
    report(3, "all 64 joint assignments eliminated on the singlet table", start, Duration::from_secs(60));
}

#[test]
fn criterion_04_pseudo_telepathy_game() {
    let start = Instant::now();
    let t = singlet_table();
    let winners = all_strategies(t.scenario())
        .into_iter()
        .filter(|s| play_game(&t, &GameStrategy::Classical(s.clone())).unwrap().wins_all)
        .count();
    assert_eq!(winners, 0, "no classical strategy may win on every question pair");

    let field = FieldSpec::new(2).unwrap();
    let menu = xyz_menu(field);
    let shared = GameStrategy::SharedState {
        state: Subspace::line(&mobit::singlet(field)).unwrap(),
        meas1: menu.clone(),
        meas2: menu,
    };
    assert!(play_game(&t, &shared).unwrap().wins_all, "the shared-state strategy must win");
    report(4, "game lost by all 64 classical strategies, won with the shared state", start, Duration::from_secs(60));
}

#[test]
fn criterion_05_nonlocal_box_suite() {
    let start = Instant::now();
    let t = prbox_table();
    assert!(check_modal_ns(&t), "the box is no-signalling");
    assert!(is_minimal_ns(&t).unwrap(), "the box is minimally no-signalling");
    let strong = strong_resolution(&t).expect("the box is strongly resolvable");
    assert_eq!(strong, prbox_resolution(), "the strong resolution is the half/half table");
    assert!(resolution_unique(&t).unwrap(), "the resolution is unique");
    assert!(lhv_membership(&t).unwrap().is_none(), "the box has no local model");

    let bounds = MqtSearchBounds { configs: vec![(2, 2), (3, 2)], max_candidates: 5_000_000 };
    assert!(
        matches!(mqt_search(&t, &bounds), MqtVerdict::No { .. }),
        "no two-dimensional finite-field state realizes the box over Z_2 or Z_3"
    );
    report(5, "nonlocal box: minimal NS, unique strong resolution, no local or state model", start, Duration::from_secs(60));
}

#[test]
fn criterion_06_unresolvable_table_certificate() {
    let start = Instant::now();
    let t = table_n();
    assert!(check_modal_ns(&t));
    let WeakResolution::Infeasible { certificate } = weak_resolution(&t) else {
        panic!("the degenerate table must have no resolution");
    };
    assert!(!certificate.is_empty(), "an infeasibility certificate is required");
    assert!(
        certificate.iter().any(|(label, _)| label.contains("W,W")),
        "the certificate must involve the (W, W) block constraints"
    );
    // Every certificate weight refers to a constraint by name.
    assert!(certificate.iter().all(|(_, w)| !w.is_zero()));
    report(6, "no-resolution table rejected with a certificate naming the degenerate block", start, Duration::from_secs(5));
}

#[test]
fn criterion_07_singlet_resolution() {
    let start = Instant::now();
    let t = singlet_table();
    let WeakResolution::Table(pt) = weak_resolution(&t) else {
        panic!("the singlet table is resolvable");
    };
    assert_eq!(pt, singlet_resolution(), "the weak resolution matches the fixture");
    assert!(resolution_unique(&t).unwrap(), "the resolution is unique");
    assert!(strong_resolution(&t).is_none(), "no strong resolution exists");
    report(7, "singlet resolution unique, equals the fixture, and is not strong", start, Duration::from_secs(5));
}

#[test]
fn criterion_08_matching_resolutions() {
    let start = Instant::now();
    let field = FieldSpec::new(2).unwrap();
    let menu = xyz_menu(field);
    let pt = hall_resolution(&mobit::singlet(field), &menu, &menu).unwrap();
    assert_eq!(pt, singlet_resolution(), "the matching construction lands on the singlet fixture");

    let mut rng = ChaCha8Rng::seed_from_u64(0xB1B0);
    let configs: Vec<(u64, usize)> =
        [2u64, 3, 5].iter().flat_map(|&p| (2..=4).map(move |d| (p, d))).collect();
    for i in 0..200 {
        let (p, dim) = configs[i % configs.len()];
        let field = FieldSpec::new(p).unwrap();
        let psi = random_maximal_state(&mut rng, dim, field);
        let menu1 = random_menu(&mut rng, dim, field, 2);
        let menu2 = random_menu(&mut rng, dim, field, 2);
        let pt = hall_resolution(&psi, &menu1, &menu2).unwrap();
        assert!(check_prob_ns(&pt), "matching resolution must be no-signalling (sample {i})");
        let t = build_table(&Subspace::line(&psi).unwrap(), &menu1, &menu2).unwrap();
        assert!(pt.zero_on_blanks(&t), "matching resolution must vanish off the table (sample {i})");
    }
    report(8, "matching resolutions valid on the singlet and 200 random maximal states", start, Duration::from_secs(120));
}

#[test]
fn criterion_09_channel_representation_roundtrip() {
    let start = Instant::now();
    fn roundtrip(map: &TypeLMap) -> bool {
        let dim = map.input_dim();
        let joint = extend_to_joint(&dilate(map).unwrap(), dim).unwrap();
        let extracted = kraus_from_extension(|m| joint.apply(m), dim, map.field()).unwrap();
        let space = StateSpace::new(dim, map.field());
        maps_agree(
            |l| apply_type_l(&extracted, l),
            |l| apply_type_l(map, l),
            &space,
            DEFAULT_ENUM_BUDGET,
        )
        .unwrap()
    }

    // 100 seeded random unconditional channels over Z_2 and Z_3, dims 2-3,
    // up to three Kraus terms.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4A7);
    let configs: Vec<(u64, usize, usize)> = [2u64, 3]
        .iter()
        .flat_map(|&p| (2..=3).flat_map(move |d| (1..=3).map(move |k| (p, d, k))))
        .collect();
    for i in 0..100 {
        let (p, dim, k) = configs[i % configs.len()];
        let field = FieldSpec::new(p).unwrap();
        let map = mqt::sample::random_unconditional_map(&mut rng, dim, k, field);
        assert!(roundtrip(&map), "round trip failed on sample {i} (p={p}, dim={dim}, k={k})");
    }

    // Exhaustive conditioning-diagram check over Z_2, dim 2, reference dim 2,
    // for every unconditional channel with one or two Kraus terms.
    let field = FieldSpec::new(2).unwrap();
    let all_mats: Vec<Matrix> = (0..16u32)
        .map(|bits| {
            let rows = vec![
                vec![(bits & 1) as u64, ((bits >> 1) & 1) as u64],
                vec![((bits >> 2) & 1) as u64, ((bits >> 3) & 1) as u64],
            ];
            Matrix::from_rows(&rows, 2, field).unwrap()
        })
        .collect();
    let mut families: Vec<Vec<Matrix>> = Vec::new();
    for a in &all_mats {
        families.push(vec![a.clone()]);
        for b in &all_mats {
            families.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut checked = 0;
    for kraus in families {
        if !check_unconditional(&kraus).unwrap() {
            continue;
        }
        let map = TypeLMap::new(kraus).unwrap();
        assert!(
            verify_type_e(&map, 2, DEFAULT_ENUM_BUDGET).unwrap(),
            "conditioning diagram failed for a channel with {} Kraus terms",
            map.kraus().len()
        );
        checked += 1;
    }
    assert!(checked > 0);
    report(
        9,
        "representation round trip on 100 random channels; conditioning diagram exhaustively",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_10_structure_counts() {
    let start = Instant::now();
    let field = FieldSpec::new(2).unwrap();

    // Fifteen pure states of two mobits: nine product, six entangled.
    let space = StateSpace::composite(&[2, 2], field);
    let states = projective_points(&space, Variance::Primal, DEFAULT_ENUM_BUDGET).unwrap();
    assert_eq!(states.len(), 15);
    let product = states.iter().filter(|s| schmidt(s).unwrap().schmidt_number == 1).count();
    assert_eq!((product, states.len() - product), (9, 6));

    // Lattice laws on Z_2^3: modular, not distributive.
    let cube = StateSpace::new(3, field);
    let subs = all_subspaces(&cube, Variance::Primal, DEFAULT_ENUM_BUDGET).unwrap();
    assert_eq!(subs.len(), 16);
    let mut distributive_fails = 0u64;
    for a in &subs {
        for b in &subs {
            for c in &subs {
                if c.contains_subspace(a).unwrap() {
                    let lhs = a.join(&b.meet(c).unwrap()).unwrap();
                    let rhs = a.join(b).unwrap().meet(c).unwrap();
                    assert_eq!(lhs, rhs, "modular law must hold");
                }
                let lhs = a.meet(&b.join(c).unwrap()).unwrap();
                let rhs = a.meet(b).unwrap().join(&a.meet(c).unwrap()).unwrap();
                if lhs != rhs {
                    distributive_fails += 1;
                }
            }
        }
    }
    assert!(distributive_fails > 0, "the subspace lattice is not distributive");

    // Schmidt decompose-and-reassemble on 500 random bipartite states.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C31);
    for i in 0..500 {
        let p = [2u64, 3, 5][i % 3];
        let (d0, d1) = [(2, 2), (2, 3), (3, 3)][(i / 3) % 3];
        let field = FieldSpec::new(p).unwrap();
        let space = StateSpace::composite(&[d0, d1], field);
        let coords: Vec<u64> = {
            let m = random_matrix(&mut rng, 1, d0 * d1, field);
            m.row(0)
        };
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        let psi = Vector::ket(&coords, &space).unwrap();
        let d = schmidt(&psi).unwrap();
        assert_eq!(schmidt_reassemble(&d, field).unwrap(), psi, "reassembly failed (sample {i})");
        let line = Subspace::line(&psi).unwrap();
        assert_eq!(reduce(&line, 1).unwrap().dim(), d.schmidt_number);
        assert_eq!(reduce(&line, 0).unwrap().dim(), d.schmidt_number);
    }

    // Purification round trip on 100 random mixed states: the purifying
    // construction reduces back to the mixture, and twisted purifications
    // reconnect by an invertible map on the purifying factor.
    for i in 0..100 {
        let p = [2u64, 3][i % 2];
        let dim = 2 + (i % 3);
        let field = FieldSpec::new(p).unwrap();
        let space = StateSpace::new(dim, field);
        let m = random_matrix(&mut rng, 1 + i % dim, dim, field);
        let sub = Subspace::from_basis(m, &space, Variance::Primal).unwrap();
        if sub.is_null() {
            continue;
        }
        let psi = purify(&sub).unwrap();
        let back = reduce(&Subspace::line(&psi).unwrap(), 0).unwrap();
        assert_eq!(back.basis(), sub.basis(), "purification must reduce to the mixture (sample {i})");

        let s = sub.dim();
        let twist = mqt::sample::random_invertible(&mut rng, s, field);
        let psi2 = apply_left(&twist, &psi).unwrap();
        let conn = connect_purifications(&psi, &psi2)
            .unwrap()
            .expect("purifications of the same mixture must connect");
        let moved = apply_left(&conn, &psi).unwrap();
        assert_eq!(
            Subspace::line(&moved).unwrap(),
            Subspace::line(&psi2).unwrap(),
            "the connector must carry one purification onto the other (sample {i})"
        );
    }
    report(10, "state counts, lattice laws, 500 Schmidt and 100 purification round trips", start, Duration::from_secs(60));
}

#[test]
fn criterion_11_hierarchy() {
    let start = Instant::now();
    let bounds = MqtSearchBounds::default();

    // Strictness witnesses for LHV < SPR < WPR < NSP.
    let singlet = classify(&singlet_table(), &bounds);
    assert!(singlet.ns && singlet.wpr && !singlet.spr && !singlet.lhv);
    assert!(matches!(singlet.mqt, MqtVerdict::Yes { .. }), "the singlet table is realizable");

    let prbox = classify(&prbox_table(), &bounds);
    assert!(prbox.ns && prbox.wpr && prbox.spr && !prbox.lhv);
    assert!(matches!(prbox.mqt, MqtVerdict::No { .. }), "the box is not realizable");

    let degenerate = classify(&table_n(), &bounds);
    assert!(degenerate.ns && !degenerate.wpr && !degenerate.spr && !degenerate.lhv);
    assert!(matches!(degenerate.mqt, MqtVerdict::No { .. }));

    // LHV implies SPR: the average of the component resolutions is positive
    // on every mark. Checked on 100 random joins of local strategies.
    let mut rng = ChaCha8Rng::seed_from_u64(0x11A5);
    let scenario = Scenario::symmetric(&["X", "Y", "Z"], 2);
    for i in 0..100 {
        let (t, _strategies) = random_lhv_table(&mut rng, &scenario, 1 + i % 4);
        assert!(lhv_membership(&t).unwrap().is_some(), "joins are LHV by construction");
        let strong = strong_resolution(&t)
            .unwrap_or_else(|| panic!("LHV table without a strong resolution (sample {i})"));
        assert!(strong.positive_on_marks(&t) && strong.zero_on_blanks(&t));
        assert!(check_prob_ns(&strong));
    }
    report(11, "hierarchy strictness witnesses and LHV => SPR on 100 random joins", start, Duration::from_secs(60));
}
