fn main() {
    std::process::exit(majsim::run_cli(std::env::args_os()));
}
