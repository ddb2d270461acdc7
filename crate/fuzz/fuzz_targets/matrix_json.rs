#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::coxeter::Realization;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = Realization::from_json(s) {
        assert_eq!(r.actions.len(), r.roots.len());
    }
});
