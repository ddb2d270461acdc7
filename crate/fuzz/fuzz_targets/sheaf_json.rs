#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::sheaf::Sheaf;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = Sheaf::from_json(s) {
        let text = f.to_json();
        let again = Sheaf::from_json(&text).expect("written sheaf reads back");
        assert_eq!(text, again.to_json());
    }
});
