#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::io::{reports_from_csv, reports_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(reports) = reports_from_csv(text) {
        let csv = reports_to_csv(&reports);
        let again = reports_from_csv(&csv).unwrap();
        assert_eq!(reports_to_csv(&again), csv);
    }
});
