//! The command-line pipeline driven in-process: build, equilateralize, lift,
//! render and export for the diamond.

use lgraph::cli::main_with_args;

fn main() {
    let dir = std::env::temp_dir().join("lgraph-cli-pipeline");
    std::fs::create_dir_all(&dir).unwrap();
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    std::fs::write(p("diamond.json"), r#"{"n":4,"edges":[[0,1],[0,2],[1,2],[0,3],[1,3]]}"#).unwrap();
    let steps: [&[&str]; 5] = [
        &["build", "--in", &p("diamond.json"), "--out", &p("rep.json")],
        &["equilateralize", "--in", &p("rep.json"), "--out", &p("eq.json")],
        &["lift", "--in", &p("eq.json"), "--out", &p("boxes.json")],
        &["render-svg", "--in", &p("eq.json"), "--overlay-staircase", "--out", &p("eq.svg")],
        &["export-obj", "--in", &p("boxes.json"), "--out", &p("boxes.obj")],
    ];
    for args in steps {
        let status = main_with_args(std::iter::once("lgraph").chain(args.iter().copied()));
        println!("{} -> exit {status}", args[0]);
    }
    println!("artifacts in {}", dir.display());
}
