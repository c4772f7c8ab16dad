#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::kolmolab::OmegaEstimate;

fuzz_target!(|data: &[u8]| {
    let Ok(omega) = serde_json::from_slice::<OmegaEstimate>(data) else {
        return;
    };
    let text = serde_json::to_string(&omega).unwrap();
    let back: OmegaEstimate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, omega);
    assert_eq!(back.binary_digits().len(), omega.scale as usize);
});
