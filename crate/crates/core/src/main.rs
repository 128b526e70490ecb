fn main() {
    std::process::exit(ptasynth::cli::main_with_args(std::env::args_os()));
}
