use thzmc::analysis::{capacity_curve, conn_prob_mc, ergodic_capacity_sc, AnalysisOptions};
use thzmc::blockage::SystemParams;
use thzmc::channel::{synthetic, ChannelModel, LinkBudget, TransmissionWindow};
use thzmc::simulator::{snapshot_capacity, snapshot_connection_probability, BlockerSharing, SnapshotConfig};

#[test]
fn single_connectivity_capacity_matches_simulation() {
    let p = SystemParams::default().with_lambda_a(1e-2);
    let opts = AnalysisOptions::default();
    let model = ChannelModel::new(
        synthetic::bundled_w1(),
        TransmissionWindow::w1(),
        LinkBudget::indoor(20.0),
        p.height_diff(),
    )
    .unwrap();
    let curve = capacity_curve(model, &p, 1, &opts).unwrap();
    let exact = ergodic_capacity_sc(&p, &curve, &opts).value;
    let sim = snapshot_capacity(1, &p, &curve, &SnapshotConfig::new(100_000, 31)).unwrap();
    let z = sim[0].z_score(exact);
    assert!(z.abs() < 3.0, "{} +- {} vs {exact}", sim[0].value, sim[0].std_error);
}

#[test]
fn independent_blockers_match_analysis() {
    let opts = AnalysisOptions::default().with_samples(400_000);
    for (lambda_a, seed) in [(5e-3, 1), (1.5e-2, 2)] {
        let p = SystemParams::default().with_lambda_a(lambda_a);
        let cfg = SnapshotConfig {
            sharing: BlockerSharing::PerLink,
            ..SnapshotConfig::new(100_000, seed)
        };
        let sim = snapshot_connection_probability(3, &p, &cfg).unwrap();
        for (n, est) in (1..=3).zip(&sim) {
            let exact = conn_prob_mc(n, &p, &opts).value;
            let z = est.z_score(exact);
            assert!(
                z.abs() < 3.5,
                "lambda_a = {lambda_a}, n = {n}: {} vs {exact}",
                est.value
            );
        }
    }
}

#[test]
fn shared_blockers_never_beat_independent_analysis() {
    // one blocker can cut several links, which only lowers connectivity
    let p = SystemParams::default().with_lambda_a(1.5e-2);
    let opts = AnalysisOptions::default();
    let sim = snapshot_connection_probability(2, &p, &SnapshotConfig::new(100_000, 77)).unwrap();
    let exact = conn_prob_mc(2, &p, &opts).value;
    assert!(sim[1].value < exact);
}
