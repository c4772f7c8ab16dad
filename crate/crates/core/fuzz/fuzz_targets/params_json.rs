#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::prng::{check_full_period_conditions, generate, LcgParams, MAX_MODULUS};

fuzz_target!(|data: &[u8]| {
    let Ok(p) = serde_json::from_slice::<LcgParams>(data) else {
        return;
    };
    assert!(p.m() >= 1 && p.m() <= MAX_MODULUS);
    assert!(p.a() < p.m() && p.b() < p.m() && p.r0() < p.m());
    let _ = check_full_period_conditions(&p);
    assert!(generate(&p, 64).unwrap().iter().all(|&x| x < p.m()));
});
