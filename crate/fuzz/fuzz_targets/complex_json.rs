#![no_main]
use libfuzzer_sys::fuzz_target;
use momix::bmp::BmpCategory;
use momix::cli::artifact::ComplexJson;
use momix::homotopy::BmpCtx;
use std::sync::OnceLock;

fn cat() -> &'static BmpCategory {
    static CAT: OnceLock<BmpCategory> = OnceLock::new();
    CAT.get_or_init(|| BmpCategory::parse_type("A1").unwrap())
}

fuzz_target!(|data: &[u8]| {
    let Ok(j) = serde_json::from_slice::<ComplexJson>(data) else { return };
    if j.terms.len() > 8 || j.terms.iter().flatten().any(|t| t.mult > 8) {
        return;
    }
    let ctx = BmpCtx::new(cat()).unwrap();
    if let Ok(c) = j.to_complex(&ctx) {
        let back = ComplexJson::from_complex(&ctx, &c);
        assert_eq!(back.to_complex(&ctx).unwrap(), c);
    }
});
