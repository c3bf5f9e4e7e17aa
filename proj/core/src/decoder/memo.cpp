#include "cegen/decoder/memo.hpp"

#include <stdexcept>

namespace cegen::decoder {

ContextKey context_key(std::string_view bug_id, const SourceBuffer& buf, std::size_t caret) {
    if (caret > buf.size()) throw std::out_of_range("context_key: caret out of range");
    return Hash128Builder()
        .str(bug_id)
        .u64(0x1f)  // domain separator between id and text
        .str(buf.view().substr(0, caret))
        .finish();
}

void RejectedTrie::insert(std::string_view token) {
    if (!root_) root_ = std::make_unique<Node>();
    Node* node = root_.get();
    for (char c : token) {
        if (node->terminal) return;  // a stored prefix already covers this token
        auto& child = node->children[c];
        if (!child) child = std::make_unique<Node>();
        node = child.get();
    }
    node->terminal = true;
}

bool RejectedTrie::has_rejected_prefix(std::string_view token) const {
    const Node* node = root_.get();
    if (!node) return false;
    if (node->terminal) return true;
    for (char c : token) {
        auto it = node->children.find(c);
        if (it == node->children.end()) return false;
        node = it->second.get();
        if (node->terminal) return true;
    }
    return false;
}

MemoStore::MemoStore(const Vocabulary& vocab) : vocab_(vocab) {
    extensions_.resize(vocab.size());
    for (TokenId t = 0; t < vocab.size(); ++t) extensions_[t] = vocab.extensions_of(t);
}

MemoStore::Entry& MemoStore::entry(const ContextKey& key) {
    Entry& e = entries_[key];
    if (e.rejected_mask.empty()) {
        e.rejected_mask.resize(vocab_.size(), false);
        e.prune_logged.resize(vocab_.size(), false);
    }
    return e;
}

void MemoStore::record_accepted(Entry& e, TokenId token) {
    if (e.rejected_mask[token])
        throw std::logic_error("memo: token both accepted and rejected at one context");
    e.accepted.insert(token);
}

void MemoStore::record_rejected(Entry& e, TokenId token) {
    if (e.accepted.count(token))
        throw std::logic_error("memo: token both accepted and rejected at one context");
    e.rejected.insert(vocab_.token_text(token));
    for (TokenId ext : extensions_[token]) e.rejected_mask[ext] = true;
}

}  // namespace cegen::decoder
