collect_ignore = ["examples", "demos"]
