#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "whtmlgate/projector.hpp"

namespace whtmlgate::gateway {

enum class Scheme { Http, Https, Wap, Waps };

std::string_view to_string(Scheme scheme) noexcept;

/// https and waps carry opaque envelopes.
constexpr bool is_secure(Scheme s) noexcept { return s == Scheme::Https || s == Scheme::Waps; }

/// http/https select the Html profile, wap/waps the Wml profile.
constexpr projector::Target profile_of(Scheme s) noexcept {
    return s == Scheme::Http || s == Scheme::Https ? projector::Target::Html : projector::Target::Wml;
}

class UrlError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An absolute URL on one of the four pseudo-schemes.
struct Url {
    Scheme scheme = Scheme::Http;
    std::string authority;  // host[:port], may be empty
    std::string path = "/";

    std::string str() const;
};

/// Parses `scheme://authority/path`. Throws UrlError.
Url parse_url(std::string_view text);

}  // namespace whtmlgate::gateway
