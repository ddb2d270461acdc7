#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::sheaf::MomentGraph;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = MomentGraph::from_json(s) {
        let text = g.to_json();
        let again = MomentGraph::from_json(&text).expect("written graph reads back");
        assert_eq!(text, again.to_json());
        let _ = g.linear_extension();
    }
});
