#include "whtmlgate/gateway/cache.hpp"

#include <fstream>
#include <optional>
#include <stdexcept>
#include <unistd.h>

namespace whtmlgate::gateway {

namespace {

std::optional<std::vector<std::uint8_t>> read_if_exists(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) return std::nullopt;
    return bytes;
}

}  // namespace

BytecodeCache::BytecodeCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path BytecodeCache::path_for(const wmls::ScriptSource& src) const {
    return dir_ / (wmls::cache_key(src) + ".wbc");
}

std::vector<std::uint8_t> BytecodeCache::get_or_compile(const wmls::ScriptSource& src) {
    const auto target = path_for(src);
    if (auto hit = read_if_exists(target)) return std::move(*hit);

    std::lock_guard lock(compile_mu_);
    if (auto hit = read_if_exists(target)) return std::move(*hit);

    const wmls::BytecodeModule module = wmls::compile(src);
    ++compiles_;
    std::vector<std::uint8_t> bytes = wmls::encode_module(module);

    auto temp = target;
    temp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(temp_seq_++);
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("cannot write " + temp.string());
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) {
        std::filesystem::remove(temp, ec);
        throw std::runtime_error("cannot install " + target.string());
    }
    return bytes;
}

}  // namespace whtmlgate::gateway
