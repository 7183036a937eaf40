"""Lightweight derivation traces for the checking engines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TraceNode:
    rule: str
    goal: str
    ok: bool = False
    children: list["TraceNode"] = field(default_factory=list)

    def child(self, rule: str, goal: str) -> "TraceNode":
        node = TraceNode(rule, goal)
        self.children.append(node)
        return node

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "goal": self.goal,
            "ok": self.ok,
            "children": [c.to_dict() for c in self.children],
        }

    def render(self, indent: int = 0) -> str:
        mark = "+" if self.ok else "-"
        lines = ["  " * indent + f"{mark} [{self.rule}] {self.goal}"]
        for c in self.children:
            lines.append(c.render(indent + 1))
        return "\n".join(lines)
