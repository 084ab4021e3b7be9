#include "whtmlgate/gateway/url.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace whtmlgate::gateway {

namespace {

constexpr std::array<std::pair<std::string_view, Scheme>, 4> kSchemes{{
    {"http", Scheme::Http},
    {"https", Scheme::Https},
    {"wap", Scheme::Wap},
    {"waps", Scheme::Waps},
}};

bool is_url_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u > 0x20 && u < 0x7F;
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
    for (const auto& [name, s] : kSchemes) {
        if (s == scheme) return name;
    }
    return "?";
}

std::string Url::str() const { return std::string(to_string(scheme)) + "://" + authority + path; }

Url parse_url(std::string_view text) {
    const auto sep = text.find("://");
    if (sep == std::string_view::npos) throw UrlError("not an absolute URL: '" + std::string(text) + "'");
    std::string scheme(text.substr(0, sep));
    std::transform(scheme.begin(), scheme.end(), scheme.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    Url url;
    bool known = false;
    for (const auto& [name, s] : kSchemes) {
        if (scheme == name) {
            url.scheme = s;
            known = true;
        }
    }
    if (!known) throw UrlError("unsupported scheme '" + scheme + "'");

    const std::string_view rest = text.substr(sep + 3);
    if (!std::all_of(rest.begin(), rest.end(), is_url_char)) throw UrlError("URL contains invalid characters");
    const auto slash = rest.find('/');
    url.authority = std::string(rest.substr(0, slash));
    if (url.authority.empty()) throw UrlError("URL has no host: '" + std::string(text) + "'");
    url.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
    return url;
}

}  // namespace whtmlgate::gateway
