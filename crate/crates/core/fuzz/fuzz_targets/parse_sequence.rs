#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::io::{parse_residues, parse_sequence, reals_to_csv};
use randlab_core::randtests::{battery, SampleSeq};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = parse_sequence(text) {
        assert!(values.iter().all(|v| v.is_finite()));
        assert_eq!(parse_sequence(&reals_to_csv(&values)).unwrap(), values);
        if let Ok(seq) = SampleSeq::new(values) {
            if let Ok(report) = battery(&seq) {
                assert!(report
                    .reports
                    .iter()
                    .all(|r| (0.0..=1.0).contains(&r.p_value)));
            }
        }
    }
    if let Ok(u) = parse_residues(text, 1000) {
        assert!(u.iter().all(|v| (0.0..1.0).contains(v)));
    }
});
