#include "isoresolve/run_io.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "isoresolve/error.hpp"

namespace isoresolve {

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                     &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
        fail(ErrorKind::Io, "sha256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::filesystem::path create_run_dir(const std::filesystem::path& root,
                                     const std::string& config_text) {
    const std::string stem = utc_timestamp() + "-" + sha256_hex(config_text).substr(0, 12);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    for (int suffix = 0; suffix < 1000; ++suffix) {
        std::filesystem::path dir = root / (suffix == 0 ? stem : stem + "-" + std::to_string(suffix));
        if (std::filesystem::create_directory(dir, ec)) return dir;
        if (ec) fail(ErrorKind::Io, "cannot create run directory " + dir.string() + ": " + ec.message());
    }
    fail(ErrorKind::Io, "cannot allocate a run directory under " + root.string());
}

}  // namespace isoresolve
