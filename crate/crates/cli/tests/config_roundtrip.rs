use proptest::prelude::*;
use rwinv_cli::config::{Command, RunConfig};

proptest! {
    #[test]
    fn exact_lamplighter_config_round_trips(
        grid in proptest::collection::vec(0usize..5000, 1..5),
        eps in 1e-6f64..0.999,
        seed in any::<u64>(),
        flags in proptest::collection::vec(any::<bool>(), 5),
        rational in any::<bool>(),
        sites in proptest::collection::vec(-20i64..20, 1..4),
    ) {
        let mut cfg = RunConfig::new(Command::ExactLamplighter);
        let n: Vec<String> = grid.iter().map(|x| x.to_string()).collect();
        cfg.set("n", &n.join(" , ")).unwrap();
        cfg.set("epsilon", &format!("{eps:e}")).unwrap();
        cfg.set("seed", &seed.to_string()).unwrap();
        for (key, f) in ["entropy", "tv-shift", "check-invariance", "radius-profile", "constancy-profile"].iter().zip(&flags) {
            cfg.set(key, if *f { "yes" } else { "no" }).unwrap();
        }
        cfg.set("mode", if rational { "exact" } else { "f64" }).unwrap();
        let incs: Vec<String> = sites.iter().map(|s| format!("(0)[{s}:#1]")).collect();
        cfg.set("increments", &incs.join("; ")).unwrap();
        let back = RunConfig::from_kv(&cfg.to_kv()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.hash(), cfg.hash());
        prop_assert_eq!(back.grid(), grid);
        prop_assert_eq!(back.f64("epsilon"), eps);
        prop_assert_eq!(back.u64("seed"), seed);
        let json = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(serde_json::from_str::<RunConfig>(&json).unwrap(), cfg);
    }
}
