"""
Executable checks of the ideal identities, the refined Swan conductor and the defect machinery.
"""
