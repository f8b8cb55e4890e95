use clap::Parser;
use wildhurwitz::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = run(&cli);
    if code == 2 {
        eprintln!("{report}");
    } else {
        println!("{report}");
    }
    std::process::exit(code);
}
