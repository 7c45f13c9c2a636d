use cscale_core::*;

fn main() {
    let cfg_base = DetectionConfig {
        embedding: Some(EmbeddingParams::new(3, 1).unwrap()),
        ..Default::default()
    };
    for mu21 in [0.1, 0.2, 0.3] {
        let mut both_ok = 0;
        let mut fwd_ok = 0;
        let mut rev_ok = 0;
        let mut rev_ps = Vec::new();
        for seed in 0..20u64 {
            let spec = LogisticNetworkSpec::pair(0.0, mu21, 5000);
            let series = generate_logistic_network(&spec, Some(1_000_000 + seed)).unwrap();
            let cfg = DetectionConfig { master_seed: 42 ^ seed, ..cfg_base.clone() };
            let (f, r) = detect_pair(&series[0], &series[1], &cfg).unwrap();
            let fo = f.p_value < 0.05;
            let ro = r.p_value >= 0.05;
            fwd_ok += fo as u32;
            rev_ok += ro as u32;
            both_ok += (fo && ro) as u32;
            rev_ps.push((r.slope, r.p_value));
        }
        println!("mu21={mu21}: fwd_ok={fwd_ok}/20 rev_ok={rev_ok}/20 both={both_ok}/20");
        println!("  rev (slope,p): {:?}", rev_ps.iter().map(|(s,p)| format!("{s:+.4}/{p:.3}")).collect::<Vec<_>>());
    }
}
