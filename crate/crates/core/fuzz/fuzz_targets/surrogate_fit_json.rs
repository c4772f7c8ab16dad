#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::cexp::{predict, SurrogateFit};

fuzz_target!(|data: &[u8]| {
    let Ok(fit) = serde_json::from_slice::<SurrogateFit>(data) else {
        return;
    };
    if fit.validate().is_ok() {
        for n in [1, 2, 100, 1 << 20] {
            let _ = predict(&fit, n);
        }
    }
});
