#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::polyalg::Field;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = Field::parse(s) {
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(Field::parse(&text).unwrap(), f);
    }
});
