#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "whtmlgate/gateway/client.hpp"
#include "whtmlgate/media/media.hpp"
#include "whtmlgate/projector.hpp"
#include "whtmlgate/senv/envelope.hpp"
#include "whtmlgate/whtml/document.hpp"
#include "whtmlgate/wmls/compiler.hpp"
#include "whtmlgate/wmls/vm.hpp"

namespace py = pybind11;
using namespace whtmlgate;

namespace {

using Bytes = std::vector<std::uint8_t>;

Bytes to_vec(const py::bytes& b) {
    const std::string_view s = b;
    return Bytes(s.begin(), s.end());
}

py::bytes to_py(const Bytes& v) { return py::bytes(reinterpret_cast<const char*>(v.data()), v.size()); }

projector::Target parse_profile(const std::string& profile) {
    if (profile == "html") return projector::Target::Html;
    if (profile == "wml") return projector::Target::Wml;
    throw py::value_error("profile must be 'html' or 'wml'");
}

whtml::WhtmlDocument parse_doc(const std::string& text, const std::optional<std::string>& registry) {
    if (registry) return whtml::parse(text, whtml::TagRegistry::load_file(*registry));
    return whtml::parse(text);
}

py::object from_value(const wmls::Value& v) {
    if (v.is_integer()) return py::int_(std::get<std::int64_t>(v.v));
    if (v.is_boolean()) return py::bool_(std::get<bool>(v.v));
    return py::str(std::get<std::string>(v.v));
}

wmls::Value to_value(const py::handle& h) {
    if (py::isinstance<py::bool_>(h)) return wmls::Value::boolean(h.cast<bool>());
    if (py::isinstance<py::int_>(h)) return wmls::Value::integer(h.cast<std::int64_t>());
    if (py::isinstance<py::str>(h)) return wmls::Value::string(h.cast<std::string>());
    throw py::type_error("script arguments must be int, bool or str");
}

// An exception instance, so attributes can be attached before raising.
py::object instance(const py::handle& type, const char* message) {
    return py::reinterpret_borrow<py::object>(type)(message);
}

senv::SessionId to_session(const py::bytes& b) {
    const std::string_view s = b;
    if (s.size() != 16) throw py::value_error("session id must be 16 bytes");
    senv::SessionId id;
    std::copy(s.begin(), s.end(), id.begin());
    return id;
}

}  // namespace

PYBIND11_MODULE(_whtmlgate, m) {
    m.doc() = "wHTML projection, WMLScript bytecode, WBMP and envelope primitives";

    static py::exception<whtml::Error> whtml_error(m, "WhtmlError", PyExc_ValueError);
    static py::exception<projector::ProjectionError> projection_error(m, "ProjectionError", PyExc_ValueError);
    static py::exception<wmls::CompileError> compile_error(m, "CompileError", PyExc_ValueError);
    static py::exception<wmls::FormatError> format_error(m, "FormatError", PyExc_ValueError);
    static py::exception<wmls::VerifyError> verify_error(m, "VerifyError", PyExc_ValueError);
    static py::exception<wmls::RuntimeError> script_error(m, "ScriptError", PyExc_RuntimeError);
    static py::exception<media::MediaError> media_error(m, "MediaError", PyExc_ValueError);
    static py::exception<senv::EnvelopeError> envelope_error(m, "EnvelopeError", PyExc_ValueError);

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const whtml::Error& e) {
            py::object exc = instance(whtml_error, e.what());
            exc.attr("kind") = std::string(whtml::to_string(e.kind()));
            exc.attr("line") = e.position().line;
            exc.attr("column") = e.position().column;
            PyErr_SetObject(whtml_error.ptr(), exc.ptr());
        } catch (const projector::ProjectionError& e) {
            py::set_error(projection_error, e.what());
        } catch (const wmls::CompileError& e) {
            py::object exc = instance(compile_error, e.what());
            exc.attr("line") = e.location().line;
            exc.attr("column") = e.location().column;
            PyErr_SetObject(compile_error.ptr(), exc.ptr());
        } catch (const wmls::FormatError& e) {
            py::set_error(format_error, e.what());
        } catch (const wmls::VerifyError& e) {
            py::set_error(verify_error, e.what());
        } catch (const wmls::RuntimeError& e) {
            py::set_error(script_error, e.what());
        } catch (const media::MediaError& e) {
            py::set_error(media_error, e.what());
        } catch (const senv::EnvelopeError& e) {
            py::object exc = instance(envelope_error, e.what());
            exc.attr("kind") = senv::to_string(e.kind());
            PyErr_SetObject(envelope_error.ptr(), exc.ptr());
        }
    });

    m.def(
        "validate",
        [](const std::string& text, std::optional<std::string> registry) { parse_doc(text, registry); },
        py::arg("text"), py::arg("registry") = py::none(),
        "Parse a wHTML document; raises WhtmlError if it is not valid.");
    m.def(
        "canonical",
        [](const std::string& text, std::optional<std::string> registry) {
            return whtml::serialize_whtml(parse_doc(text, registry));
        },
        py::arg("text"), py::arg("registry") = py::none(), "Canonical wHTML markup for a document.");
    m.def(
        "project",
        [](const std::string& text, const std::string& profile, std::optional<std::string> registry) {
            return projector::serialize(projector::project(parse_doc(text, registry), parse_profile(profile)));
        },
        py::arg("text"), py::arg("profile"), py::arg("registry") = py::none(),
        "Project a wHTML document to 'html' or 'wml'.");
    m.def("digest", [](const py::bytes& b) { return to_hex16(fnv1a64(std::string_view(b))); }, py::arg("data"));

    m.def(
        "compile",
        [](const std::string& source) { return to_py(wmls::encode_module(wmls::compile(wmls::ScriptSource{source}))); },
        py::arg("source"), "Compile WMLScript source to .wbc bytes.");
    m.def(
        "disassemble", [](const py::bytes& wbc) { return wmls::disassemble(wmls::decode_module(to_vec(wbc))); },
        py::arg("wbc"));
    m.def(
        "run",
        [](const py::bytes& wbc, const py::list& args, const std::string& entry, std::uint64_t fuel) {
            const auto module = wmls::decode_module(to_vec(wbc));
            std::vector<wmls::Value> values;
            for (const auto& a : args) values.push_back(to_value(a));
            wmls::Value result;
            {
                py::gil_scoped_release release;
                result = wmls::execute(module, entry, values, fuel);
            }
            return from_value(result);
        },
        py::arg("wbc"), py::arg("args") = py::list(), py::arg("entry") = "main", py::arg("fuel") = 1'000'000,
        "Decode, verify and run a .wbc module.");
    m.def(
        "cache_key", [](const std::string& source) { return wmls::cache_key(wmls::ScriptSource{source}); },
        py::arg("source"));

    m.def("encode_mbi", [](std::uint32_t n) { return to_py(media::encode_mbi(n)); }, py::arg("n"));
    m.def(
        "decode_mbi",
        [](const py::bytes& b, std::size_t offset) {
            const auto bytes = to_vec(b);
            return media::decode_mbi(bytes, offset);
        },
        py::arg("data"), py::arg("offset") = 0, "Returns (value, bytes consumed).");
    m.def(
        "bmp_to_wbmp",
        [](const py::bytes& bmp, std::uint8_t threshold) {
            return to_py(media::encode_wbmp(media::bmp_to_bitmap(to_vec(bmp), threshold)));
        },
        py::arg("bmp"), py::arg("threshold") = 128);
    m.def(
        "wbmp_to_bmp", [](const py::bytes& wbmp) { return to_py(media::bitmap_to_bmp(media::decode_wbmp(to_vec(wbmp)))); },
        py::arg("wbmp"));

    m.def(
        "seal",
        [](const py::bytes& key, const py::bytes& session_id, std::uint64_t counter, const py::bytes& plaintext) {
            const senv::SessionKey k(to_vec(key), to_session(session_id));
            return to_py(senv::seal(k, counter, to_vec(plaintext)).serialize());
        },
        py::arg("key"), py::arg("session_id"), py::arg("counter"), py::arg("plaintext"),
        "Seal plaintext into a serialized envelope. Not encryption: a XOR keystream.");
    m.def(
        "open",
        [](const py::bytes& key, const py::bytes& envelope) {
            const auto env = senv::SecureEnvelope::parse(to_vec(envelope));
            const senv::SessionKey k(to_vec(key), env.session_id);
            const auto plain = senv::open_unchecked(k, env);
            return py::make_tuple(py::bytes(reinterpret_cast<const char*>(env.session_id.data()), env.session_id.size()),
                                  env.counter, to_py(plain));
        },
        py::arg("key"), py::arg("envelope"), "Returns (session_id, counter, plaintext).");

    m.def(
        "fetch",
        [](const std::string& url, std::optional<std::string> via) {
            const auto gw = via ? net::Endpoint::parse(*via) : gateway::default_gateway();
            gateway::FetchResult r;
            {
                py::gil_scoped_release release;
                r = gateway::fetch(gw, gateway::parse_url(url));
            }
            return py::make_tuple(r.status, r.content_type, to_py(r.body));
        },
        py::arg("url"), py::arg("via") = py::none(), "GET a URL through a gateway; returns (status, content_type, body).");
}
