fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();

    let result = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(cbindgen::Config {
            language: cbindgen::Language::C,
            cpp_compat: true,
            include_guard: Some("QWITT_H".into()),
            include_version: false,
            documentation: true,
            documentation_style: cbindgen::DocumentationStyle::Doxy,
            enumeration: cbindgen::EnumConfig { prefix_with_name: true, ..Default::default() },
            ..Default::default()
        })
        .generate()
        .map(|data| {
            data.write_to_file(format!("{crate_dir}/include/qwitt.h"));
        });

    if let Err(e) = result {
        println!("cargo:warning=header generation failed: {e}");
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
}
