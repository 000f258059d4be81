fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let header = std::path::Path::new(&crate_dir).join("include/halin_enum.h");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        Err(e) => {
            // Keep an existing header usable when generation breaks mid-edit.
            if header.exists() {
                println!("cargo:warning=cbindgen failed, keeping committed header: {e}");
            } else {
                panic!("cbindgen failed and no header is present: {e}");
            }
        }
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
