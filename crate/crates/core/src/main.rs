fn main() {
    std::process::exit(half_theta6::cli::cli_main(std::env::args_os()));
}
