fn main() {
    std::process::exit(noisy_hedonic::cli::main_with_args(std::env::args_os()));
}
