use rankdec::analysis::lemma2_prob;
use rankdec::channel::SeededRng;
use rankdec::ffield::{rank_qm, Field, FieldTower};
use rankdec::gabidulin::GabidulinCode;
use rankdec::randdec::{noisy_codeword, randomized_decode, single_guess, RandDecoderConfig};

fn code(m: usize, n: usize, k: usize) -> GabidulinCode {
    GabidulinCode::standard(FieldTower::new(2, m).unwrap(), n, k).unwrap()
}

#[test]
fn every_success_is_within_radius() {
    let c = code(10, 10, 4);
    let t = c.tower();
    let mut rng = SeededRng::new(20, 0);
    let mut successes = 0;
    for run in 0..10_000u64 {
        let w = 3 + (run % 3) as usize;
        let delta = (run % 5) as usize;
        let (_, r, _) = noisy_codeword(&c, w, &mut rng).unwrap();
        let cfg = RandDecoderConfig::new(&c, delta, 3, w).unwrap();
        let rep = randomized_decode(&c, &r, &cfg, &mut rng).unwrap();
        assert!(rep.iterations_used <= 3 && rep.iterations_used >= 1);
        if let Some(cw) = rep.outcome.codeword() {
            let d: Vec<_> = r.iter().zip(cw).map(|(&x, &y)| t.sub(x, y)).collect();
            assert!(rank_qm(t, &d) <= w);
            assert_eq!(rep.outcome.residual_rank(), Some(rank_qm(t, &d)));
            successes += 1;
        }
    }
    assert!(successes > 0);
}

#[test]
fn true_message_rate_matches_overlap_probability() {
    let c = code(12, 12, 4);
    let delta = 4;
    let trials = 4000u32;
    for w in 4..=7usize {
        let mut rng = SeededRng::new(21, w as u64);
        let mut hits = 0u32;
        for _ in 0..trials {
            let (msg, r, _) = noisy_codeword(&c, w, &mut rng).unwrap();
            if single_guess(&c, &r, delta, w, &mut rng).unwrap().message() == Some(msg.as_slice()) {
                hits += 1;
            }
        }
        let p = lemma2_prob(12, 4, delta as u32, w as u32, 2).to_f64();
        let sigma = (p * (1.0 - p) / trials as f64).sqrt().max(1.0 / trials as f64);
        let rate = hits as f64 / trials as f64;
        assert!((rate - p).abs() <= 4.0 * sigma, "w={w} rate={rate} p={p}");
    }
}
