//! The command-line front end called in-process; the `randfun` binary is a
//! one-line wrapper around the same function.
//!
//! cargo run --release --example cli_driver

fn main() {
    let out = std::env::temp_dir().join("randfun-example");
    let out = out.to_str().expect("utf-8 temp path");
    for args in [
        vec!["randfun", "growth", "--seq", "gef", "--r-grid", "2,5,10,20", "--emit-plots"],
        vec!["randfun", "zeros", "--r", "2", "--seed", "7", "--emit-plots"],
        vec!["randfun", "gn", "--n-list", "1,5,10"],
    ] {
        let mut argv = args.clone();
        argv.extend(["--out", out]);
        let code = randfun::cli::run(argv);
        println!("exit {code}\n");
    }
}
