use xqz::codec::make_network;
use xqz::synth::*;
use xqz::tensor::{compression_stats, deserialize, encode_tensor, serialize};

fn cfg(total_bits: usize, sparsity: f64, n_in: usize) -> SynthConfig {
    SynthConfig {
        total_bits,
        sparsity,
        n_in,
        ..SynthConfig::default()
    }
}

#[test]
fn care_fraction_tracks_sparsity() {
    for seed in 0..5 {
        let qm = gen_matrix(10_000, 0.9, seed);
        let care = qm.prune_mask().count_ones() as f64 / 10_000.0;
        assert!((0.085..=0.115).contains(&care), "seed {seed}: {care}");
    }
}

#[test]
fn sweeps_are_reproducible() {
    let c = cfg(4000, 0.85, 12);
    let outs = [24, 48, 96];
    let a = sweep_nout(&c, &outs).unwrap();
    let b = sweep_nout(&c, &outs).unwrap();
    let strip = |l: &SweepLine| {
        l.rows
            .iter()
            .map(SweepRow::without_timing)
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(a.best, b.best);
}

#[test]
fn payload_follows_closed_form() {
    let c = cfg(10_000, 0.9, 20);
    let line = sweep_nout(&c, &default_n_outs(20)).unwrap();
    let mut last = f64::INFINITY;
    for row in &line.rows {
        let words = 10_000usize.div_ceil(row.n_out) as f64;
        assert_eq!(row.payload_bits, 20.0 * words);
        assert!(row.payload_bits <= last);
        last = row.payload_bits;
        assert!(row.memory_reduction <= 0.9 + row.n_out as f64 / 10_000.0);
        assert!((row.ratio - 10_000.0 / row.compressed_bits()).abs() < 1e-9);
    }
}

#[test]
fn patch_bits_grow_with_word_length() {
    for seed in 0..5 {
        let c = SynthConfig {
            seed,
            trials: 1,
            ..cfg(10_000, 0.9, 20)
        };
        let line = sweep_nout(&c, &[40, 80, 160, 320]).unwrap();
        for w in line.rows.windows(2) {
            assert!(w[1].patch_bits >= w[0].patch_bits, "seed {seed}");
        }
    }
}

#[test]
fn dense_input_does_not_compress() {
    let line = sweep_nout(&cfg(3000, 0.0, 16), &[32, 64, 128]).unwrap();
    for row in &line.rows {
        assert!(row.memory_reduction <= 0.0);
    }
}

#[test]
fn decline_rule_stops_after_two_drops() {
    let c = cfg(10_000, 0.9, 12);
    let full = sweep_nout(&c, &default_n_outs(12)).unwrap();
    let cut = sweep_nout_until_decline(&c, 12, 0.9, &default_n_outs(12)).unwrap();
    let n = cut.rows.len();
    for (a, b) in cut.rows.iter().zip(&full.rows) {
        assert_eq!(a.without_timing(), b.without_timing());
    }
    if n < full.rows.len() {
        let r = &cut.rows;
        assert!(r[n - 1].memory_reduction < r[n - 2].memory_reduction);
        assert!(r[n - 2].memory_reduction < r[n - 3].memory_reduction);
    }
}

#[test]
fn stats_survive_serialization() {
    let qm = gen_matrix(10_000, 0.9, 1);
    let net = make_network(200, 20, 1).unwrap();
    let ct = encode_tensor(&qm, &net, 64).unwrap();
    let back = deserialize(&serialize(&ct).unwrap()).unwrap();
    assert_eq!(compression_stats(&back), compression_stats(&ct));
}

#[test]
fn reports_have_fixed_columns() {
    let line = sweep_nout(&cfg(2000, 0.9, 8), &[16, 32]).unwrap();
    let mut csv = Vec::new();
    write_csv(&line.rows, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n_in,n_out,sparsity,reduction,ratio,mean_patch,max_patch,seconds"
    );
    assert_eq!(text.lines().count(), 3);

    let mut json = Vec::new();
    write_json(&line.rows, &mut json).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["n_out"], 16);
}
