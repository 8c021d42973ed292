"""Hand-derived span fixtures for the code/mention/issue/email/URL patterns.

Each case: (comment, code spans as (kind, content), text, text_clean).
"""

CASES = [
    ("Use `foo()` here", [("backtick-1", "foo()")], "Use here", "Use here"),
    ("```\nx = 1\n```", [("backtick-3", "\nx = 1\n")], "", ""),
    ("Call getValue() first", [("signature", "getValue()")], "Call first", "Call first"),
    ("rename myVar please", [("identifier", "myVar")], "rename please", "rename please"),
    ("see max_items", [("identifier", "max_items")], "see", "see"),
    ("`a` and `b`", [("backtick-1", "a"), ("backtick-1", "b")], "and", "and"),
    ("obj.method(a, b) fails", [("signature", "obj.method(a, b)")], "fails", "fails"),
    ("HTTPServer is odd", [("identifier", "HTTPServer")], "is odd", "is odd"),
    ("Hello World", [], "Hello World", "Hello World"),
    ("thanks @bob!", [], "thanks!", "thanks!"),
    ("fixes #123", [], "fixes", "fixes"),
    ("mail me at dev@example.com", [], "mail me at", "mail me at"),
    ("see https://example.com/a?b=1.", [], "see https://example.com/a?b=1.", "see."),
    ("[docs](https://x.org/y) explain it", [], "[docs](https://x.org/y) explain it", "docs explain it"),
    ("www.example.org has it", [], "www.example.org has it", "has it"),
    ("`x` then callMe()", [("backtick-1", "x"), ("signature", "callMe()")], "then", "then"),
    ("Is `getFoo()` needed?", [("backtick-1", "getFoo()")], "Is needed?", "Is needed?"),
    ("```py\nfoo_bar()\n``` done", [("backtick-3", "py\nfoo_bar()\n")], "done", "done"),
    ("use camelCase and snake_case", [("identifier", "camelCase"), ("identifier", "snake_case")],
     "use and", "use and"),
    ("value2Str is fine", [("identifier", "value2Str")], "is fine", "is fine"),
    ("price $5", [], "price $5", "price $5"),
    ("a.b(c) and len(x)", [("signature", "a.b(c)"), ("signature", "len(x)")], "and", "and"),
    ("func(a=1)", [], "func(a=1)", "func(a=1)"),
    ("@alice and @bob ping", [], "and ping", "and ping"),
    ("issue #7, see PR #8", [], "issue, see PR", "issue, see PR"),
    ("C# is not an issue #", [], "C# is not an issue #", "C# is not an issue #"),
    ("email a.b+c@mail.co.uk now", [], "email now", "email now"),
    ("`unclosed backtick", [], "`unclosed backtick", "`unclosed backtick"),
    ("Run make_test() and check getX", [("signature", "make_test()")], "Run and check getX", "Run and check getX"),
    ("ends with url http://a.io", [], "ends with url http://a.io", "ends with url"),
]
