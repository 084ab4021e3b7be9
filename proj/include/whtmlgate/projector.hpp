#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "whtmlgate/whtml/document.hpp"

namespace whtmlgate::projector {

enum class Target { Html, Wml };

std::string_view to_string(Target target) noexcept;

/// `text/html` or `text/vnd.wap.wml`.
std::string_view content_type(Target target) noexcept;

/// A single-profile tree. The root is `html` or `wml`; no element of the
/// opposite profile survives, and prefixes are gone from every name.
struct ProjectedDocument {
    Target target = Target::Html;
    whtml::Element root;

    friend bool operator==(const ProjectedDocument&, const ProjectedDocument&) = default;
};

class ProjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Keeps shared elements and those of the target profile; an element of the
/// other profile is dropped together with its whole subtree. Throws
/// ProjectionError when a WML projection has no `card` directly under `wml`.
ProjectedDocument project(const whtml::WhtmlDocument& doc, Target target);

std::string serialize(const ProjectedDocument& proj);

}  // namespace whtmlgate::projector
