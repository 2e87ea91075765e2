fn main() {
    env_logger::init();
    std::process::exit(unitary_measure::cli::main_with_args(std::env::args_os()));
}
