//! Driving the command-line interface in process.

use udm::cli::main_with_args;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let runs = [
        vec!["check-ud".to_string(), "--matroid".into(), format!("{dir}/tadpole.json")],
        vec!["check-strict-ud".into(), "--graph".into(), format!("{dir}/diamond.txt"), "--format".into(), "text".into()],
        vec!["scale".into(), "--matrix".into(), format!("{dir}/diamond_incidence.json"), "--format".into(), "text".into()],
        vec!["--version".into()],
    ];
    for args in runs {
        let out = main_with_args(std::iter::once("udm".to_string()).chain(args.iter().cloned()));
        println!("$ udm {}  (exit {})", args.join(" "), out.code);
        print!("{}", out.report);
    }
}
