#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::coxeter::{CoxeterGroup, CoxeterSystem};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(mut sys) = CoxeterSystem::parse(s) else { return };
    if sys.rank() > 3 {
        return;
    }
    sys.order_bound = sys.order_bound.min(64);
    if let Ok(g) = CoxeterGroup::geometric(sys) {
        let w0 = g.longest();
        assert!(g.is_reduced(g.word(w0)));
    }
});
