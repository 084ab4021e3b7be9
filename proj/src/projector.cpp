#include "whtmlgate/projector.hpp"

#include <algorithm>

namespace whtmlgate::projector {

using whtml::Element;
using whtml::Node;
using whtml::Profile;

std::string_view to_string(Target target) noexcept { return target == Target::Html ? "html" : "wml"; }

std::string_view content_type(Target target) noexcept {
    return target == Target::Html ? "text/html" : "text/vnd.wap.wml";
}

namespace {

bool dropped(const Element& e, Target target) {
    if (e.is_root()) return false;
    return target == Target::Html ? *e.profile == Profile::WmlOnly : *e.profile == Profile::HtmlOnly;
}

Element copy_kept(const Element& src, Target target) {
    Element out;
    out.name = src.name;
    out.profile = src.profile;
    out.attributes = src.attributes;
    out.children.reserve(src.children.size());
    for (const Node& child : src.children) {
        if (const Element* e = child.element()) {
            if (!dropped(*e, target)) out.children.push_back(Node{copy_kept(*e, target)});
        } else {
            out.children.push_back(child);
        }
    }
    return out;
}

}  // namespace

ProjectedDocument project(const whtml::WhtmlDocument& doc, Target target) {
    ProjectedDocument proj;
    proj.target = target;
    proj.root = copy_kept(doc.root(), target);
    proj.root.name = std::string(to_string(target));

    if (target == Target::Wml) {
        const bool has_card = std::any_of(proj.root.children.begin(), proj.root.children.end(), [](const Node& n) {
            const Element* e = n.element();
            return e != nullptr && e->name == "card";
        });
        if (!has_card) throw ProjectionError("empty deck: the WML projection has no <card>");
    }
    return proj;
}

std::string serialize(const ProjectedDocument& proj) {
    std::string out;
    whtml::write_markup(out, proj.root, false);
    return out;
}

}  // namespace whtmlgate::projector
