#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::cexp::{classify, Response, TrialTable};

fuzz_target!(|data: &[u8]| {
    let Ok(table) = TrialTable::read_csv(data) else {
        return;
    };
    let csv = table.to_csv_string();
    assert_eq!(TrialTable::read_csv(csv.as_bytes()).unwrap(), table);
    if table.rows.len() <= 4096 {
        let _ = classify(&table, Response::Swaps, None);
    }
});
