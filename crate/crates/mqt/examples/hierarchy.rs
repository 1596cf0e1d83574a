//! The hierarchy of bipartite possibility tables:
//!
//!   LHV  (join of deterministic local strategies)
//!   < SPR (no-signalling with a strong resolution)
//!   < WPR (no-signalling with some resolution)
//!   < NSP (no-signalling),
//!
//! with every inclusion strict, and the tables realizable by finite-field
//! states sitting inside WPR but escaping SPR and LHV.
//!
//! Run with: `cargo run --example hierarchy`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mqt::resolve::{classify, MqtSearchBounds, MqtVerdict};
use mqt::sample::random_lhv_table;
use mqt::tables::{prbox_table, singlet_table, table_n, Scenario};

fn describe(name: &str, c: &mqt::resolve::Classification) {
    let flag = |b: bool| if b { "yes" } else { " no" };
    let mqt = match &c.mqt {
        MqtVerdict::Yes { p, dim, .. } => format!("yes (p={p}, dim={dim})"),
        MqtVerdict::No { .. } => " no".to_string(),
        MqtVerdict::Unknown { reason } => format!("unknown ({reason})"),
    };
    println!(
        "{name:>14}:  ns={}  wpr={}  spr={}  lhv={}  realizable={}",
        flag(c.ns),
        flag(c.wpr),
        flag(c.spr),
        flag(c.lhv),
        mqt
    );
}

fn main() {
    let bounds = MqtSearchBounds::default();

    // Three witnesses that separate the levels:
    // - the singlet table is realizable and in WPR but not SPR, not LHV;
    // - the nonlocal box is in SPR but not LHV, and not realizable;
    // - the degenerate three-outcome table is no-signalling but outside WPR.
    let singlet = classify(&singlet_table(), &bounds);
    let prbox = classify(&prbox_table(), &bounds);
    let degenerate = classify(&table_n(), &bounds);

    describe("singlet", &singlet);
    describe("nonlocal box", &prbox);
    describe("degenerate", &degenerate);

    assert!(singlet.ns && singlet.wpr && !singlet.spr && !singlet.lhv);
    assert!(matches!(singlet.mqt, MqtVerdict::Yes { .. }));
    assert!(prbox.ns && prbox.wpr && prbox.spr && !prbox.lhv);
    assert!(matches!(prbox.mqt, MqtVerdict::No { .. }));
    assert!(degenerate.ns && !degenerate.wpr && !degenerate.spr && !degenerate.lhv);

    // Every LHV table is strongly resolvable: average the resolutions of its
    // deterministic components. Spot-check on random joins.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let scenario = Scenario::symmetric(&["X", "Y", "Z"], 2);
    for _ in 0..25 {
        let (t, _) = random_lhv_table(&mut rng, &scenario, 3);
        let c = classify(&t, &bounds);
        assert!(c.lhv && c.spr && c.wpr && c.ns);
    }
    println!("\n25 random joins of local strategies: all LHV, hence SPR, WPR, NSP");
    println!("inclusions LHV < SPR < WPR < NSP are strict, witnessed above");
}
