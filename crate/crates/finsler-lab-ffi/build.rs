fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let out = std::path::Path::new(&std::env::var("OUT_DIR").unwrap()).join("finsler_lab.h");
    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.cpp_compat = true;
    config.include_guard = Some("FINSLER_LAB_H".to_string());
    config.documentation = true;
    config.usize_is_size_t = true;
    config.enumeration.prefix_with_name = true;
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(&out);
            // Keep the committed header current when the tree is writable;
            // consumers who only have the package still get the OUT_DIR copy.
            let committed = std::path::Path::new(&crate_dir).join("include/finsler_lab.h");
            let fresh = std::fs::read(&out).unwrap_or_default();
            if std::fs::read(&committed).ok().as_deref() != Some(fresh.as_slice()) {
                let _ = std::fs::write(&committed, &fresh);
            }
        }
        Err(e) => println!("cargo:warning=header generation skipped: {e}"),
    }
}
