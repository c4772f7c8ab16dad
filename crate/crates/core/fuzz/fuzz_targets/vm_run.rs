#![no_main]
use libfuzzer_sys::fuzz_target;
use randlab_core::kolmolab::{vm_run, BitString, ExecOutcome, ToyProgram};

// Each input byte contributes its low bit, so corpus files can be written
// as ASCII '0'/'1' strings.
fuzz_target!(|data: &[u8]| {
    let Some((&fuel, body)) = data.split_first() else {
        return;
    };
    let bits: Vec<bool> = body.iter().take(256).map(|b| b & 1 == 1).collect();
    let prog = ToyProgram::new(BitString::new(bits));
    let fuel = u64::from(fuel);
    if fuel == 0 {
        assert!(vm_run(&prog, fuel).is_err());
        return;
    }
    match vm_run(&prog, fuel).unwrap() {
        ExecOutcome::Halted {
            steps_used,
            bits_read,
            ..
        } => {
            assert!(steps_used <= fuel);
            assert_eq!(bits_read, prog.len());
        }
        ExecOutcome::Running | ExecOutcome::Invalid { .. } => {}
    }
});
