fn main() -> std::process::ExitCode {
    gwhf::cli::run()
}
