#pragma once

#include <atomic>
#include <filesystem>
#include <mutex>
#include <vector>

#include "whtmlgate/wmls/compiler.hpp"

namespace whtmlgate::gateway {

/// Disk cache of compiled scripts, one `<cache_key>.wbc` file per source.
/// Files are written to a temporary name and renamed into place, so a reader
/// never sees a partial file. Compilation is serialized; concurrent misses
/// on the same source compile once.
class BytecodeCache {
public:
    explicit BytecodeCache(std::filesystem::path dir);

    /// Returns the cached `.wbc` bytes, compiling on a miss. Throws
    /// CompileError for bad sources and std::runtime_error on I/O failure.
    std::vector<std::uint8_t> get_or_compile(const wmls::ScriptSource& src);

    std::filesystem::path path_for(const wmls::ScriptSource& src) const;
    const std::filesystem::path& dir() const noexcept { return dir_; }

    std::size_t compile_count() const noexcept { return compiles_.load(); }

private:
    std::filesystem::path dir_;
    std::mutex compile_mu_;
    std::atomic<std::size_t> compiles_{0};
    std::atomic<std::uint64_t> temp_seq_{0};
};

}  // namespace whtmlgate::gateway
