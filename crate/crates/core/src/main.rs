fn main() {
    std::process::exit(mtsaug::cli::main_with_args(std::env::args_os()));
}
