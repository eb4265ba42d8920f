//! End-to-end runs through the config, checkpoint and time-series layers.

use anisoflow::io::{
    checkpoint_read, checkpoint_write, parse_config, read_timeseries, run_ineq_lab, run_simulation,
    write_ratio_reports, write_timeseries, RunConfig, Simulation,
};
use anisoflow::norms::NormSample;

fn config(extra: &str) -> RunConfig {
    parse_config(&format!(
        "nx = 64\nny = 48\nlx = 12pi\nly = 10pi\nalpha1 = 1.5\nalpha2 = 1.8\nic_amplitude = 2\nic_radius = 3\n{extra}"
    ))
    .unwrap()
}

fn same_columns(a: &NormSample, b: &NormSample) -> bool {
    a.t == b.t
        && a.l1 == b.l1
        && a.l2 == b.l2
        && a.l4 == b.l4
        && a.linf == b.linf
        && a.hgamma == b.hgamma
        && a.diss_x == b.diss_x
        && a.diss_y == b.diss_y
        && a.ul_l2 == b.ul_l2
        && a.uh_l2 == b.uh_l2
}

#[test]
fn timeseries_survives_the_disk_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("t_end = 2\ngammas = 1, 2, 3");
    let (series, _) = run_simulation(&cfg).unwrap();
    let p = dir.path().join("ts.csv");
    write_timeseries(&series, &cfg.gammas_f64(), &p).unwrap();
    let back = read_timeseries(&p).unwrap();
    assert_eq!(back.gammas, vec![1.0, 2.0, 3.0]);
    assert_eq!(back.samples.len(), series.len());
    assert!(series.iter().zip(&back.samples).all(|(a, b)| same_columns(a, b)));
    let hg3 = back.column("hg3").unwrap();
    assert_eq!(hg3[4].1, series[4].hg(3.0).unwrap());
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("t_end = 3");
    let files: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let (series, state) = run_simulation(&cfg).unwrap();
            let p = dir.path().join(format!("ts{k}.csv"));
            write_timeseries(&series, &cfg.gammas_f64(), &p).unwrap();
            let c = dir.path().join(format!("c{k}.bin"));
            checkpoint_write(&state, &c).unwrap();
            [std::fs::read(p).unwrap(), std::fs::read(c).unwrap()].concat()
        })
        .collect();
    assert_eq!(files[0], files[1]);
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("half.bin");
    let (full, full_state) = run_simulation(&config("t_end = 4")).unwrap();

    let (first, half) = run_simulation(&config("t_end = 2")).unwrap();
    checkpoint_write(&half, &ckpt).unwrap();
    assert_eq!(checkpoint_read(&ckpt).unwrap().t, 2.0);
    let (second, resumed) = run_simulation(&config(&format!("t_end = 4\nresume_from = {}", ckpt.display()))).unwrap();

    assert_eq!(second[0].t, 2.0);
    let joined: Vec<&NormSample> = first.iter().chain(&second[1..]).collect();
    assert_eq!(joined.len(), full.len());
    for (a, b) in full.iter().zip(joined) {
        assert_eq!(a.t, b.t);
        assert!((a.l2 - b.l2).abs() <= 1e-12 * a.l2, "t = {}", a.t);
        assert!((a.linf - b.linf).abs() <= 1e-12 * a.linf, "t = {}", a.t);
    }
    let diff = full_state.u_hat.sub(&resumed.u_hat).unwrap().max_abs();
    assert!(diff <= 1e-12 * full_state.u_hat.max_abs(), "{diff}");
}

#[test]
fn simulation_can_be_driven_by_hand() {
    let cfg = config("t_end = 1");
    let mut sim = Simulation::new(&cfg).unwrap();
    sim.advance_to(0.3).unwrap();
    assert_eq!(sim.state().t, 0.3);
    let s = sim.sample().unwrap();
    assert!(s.l2 > 0.0 && s.hg(2.0).is_some());
    assert!(sim.steps() >= 1);
}

#[test]
fn ineq_lab_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("corpus_count = 12\ncorpus_seed = 9\ncorpus_law = ring:0.3:0.1");
    let bytes: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let p = dir.path().join(format!("r{k}.csv"));
            write_ratio_reports(&run_ineq_lab(&cfg).unwrap(), &p).unwrap();
            std::fs::read(p).unwrap()
        })
        .collect();
    assert_eq!(bytes[0], bytes[1]);
    let text = String::from_utf8(bytes[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 5);
    assert!(text.lines().skip(1).all(|l| l.contains(",12,0,")));
}
