#pragma once

// Minimal element tree on top of expat, plus escaping for writers.

#include <expat.h>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chisio::xml {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::unique_ptr<Element>> children;
    /// Concatenated character data directly inside this element.
    std::string text;
    long line = 0;

    std::optional<std::string> attribute(std::string_view key) const {
        for (const auto& [k, v] : attributes)
            if (k == key) return v;
        return std::nullopt;
    }
};

/// Local part of a possibly prefixed name ("y:ShapeNode" -> "ShapeNode").
inline std::string_view local_name(std::string_view name) {
    const auto colon = name.find(':');
    return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

namespace detail {

struct Builder {
    XML_Parser parser = nullptr;
    std::unique_ptr<Element> root;
    std::vector<Element*> stack;
    std::string error;

    static void on_start(void* self, const XML_Char* name, const XML_Char** atts) {
        auto* b = static_cast<Builder*>(self);
        auto e = std::make_unique<Element>();
        e->name = name;
        e->line = static_cast<long>(XML_GetCurrentLineNumber(b->parser));
        for (int i = 0; atts[i]; i += 2) e->attributes.emplace_back(atts[i], atts[i + 1]);
        Element* raw = e.get();
        if (b->stack.empty()) {
            b->root = std::move(e);
        } else {
            b->stack.back()->children.push_back(std::move(e));
        }
        b->stack.push_back(raw);
    }

    static void on_end(void* self, const XML_Char*) { static_cast<Builder*>(self)->stack.pop_back(); }

    static void on_text(void* self, const XML_Char* s, int len) {
        auto* b = static_cast<Builder*>(self);
        if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
    }
};

}  // namespace detail

/// Parses a complete document. Throws ParseError (with the 1-based line) if
/// the text is not well-formed XML.
inline std::unique_ptr<Element> parse(std::string_view text) {
    detail::Builder b;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                                         &XML_ParserFree);
    if (!parser) throw std::runtime_error("xml: cannot create parser");
    b.parser = parser.get();
    XML_SetUserData(b.parser, &b);
    XML_SetElementHandler(b.parser, &detail::Builder::on_start, &detail::Builder::on_end);
    XML_SetCharacterDataHandler(b.parser, &detail::Builder::on_text);

    constexpr std::size_t chunk = 1 << 20;
    std::size_t offset = 0;
    do {
        const std::size_t n = std::min(chunk, text.size() - offset);
        const bool last = offset + n == text.size();
        if (XML_Parse(b.parser, text.data() + offset, static_cast<int>(n), last) == XML_STATUS_ERROR) {
            const long line = static_cast<long>(XML_GetCurrentLineNumber(b.parser));
            throw ParseError(XML_ErrorString(XML_GetErrorCode(b.parser)), line);
        }
        offset += n;
    } while (offset < text.size());
    if (!b.root) throw ParseError("no root element", 1);
    return std::move(b.root);
}

/// Escapes text for use in element content or a double-quoted attribute.
inline std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            case '\r': out += "&#13;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace chisio::xml
