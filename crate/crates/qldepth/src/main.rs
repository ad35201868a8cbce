use qldepth::cli;

fn main() {
    std::process::exit(cli::run());
}
