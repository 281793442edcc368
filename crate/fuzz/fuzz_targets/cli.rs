#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments separated by NUL bytes; the exit code must stay in {0, 1, 2}.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args: Vec<&str> = text.split('\0').take(16).collect();
    if args.iter().any(|a| a.contains("--out")) {
        return;
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = torus_rigidity::cli::run(std::iter::once("torus-rigidity").chain(args), &mut out, &mut err);
    assert!((0..=2).contains(&code));
});
